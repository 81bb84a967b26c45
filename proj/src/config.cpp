#include "rsmec/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace rsmec {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& field, const std::string& text) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a number, got '" + text + "'");
    }
}

std::int64_t parse_int(const std::string& field, const std::string& text) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected an integer, got '" + text + "'");
    }
}

std::vector<std::string> split_list(std::string text) {
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<std::string> items;
    std::string item;
    while (in >> item) items.push_back(item);
    return items;
}

void require_positive(const std::string& field, double v) {
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

}  // namespace

RunConfig default_config() {
    RunConfig rc;
    rc.sweep.base = SystemConfig{};
    rc.sweep.snr_db = 15.0;
    rc.sweep.seed = 1;
    rc.sweep.n_realizations = 100;
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file '" + path + "'");

    RunConfig rc = default_config();
    mc::SweepSpec& sw = rc.sweep;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno),
                              "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(key, "empty value");

        if (key == "axis") {
            if (value == "task_size")
                sw.axis = mc::Axis::task_size;
            else if (value == "blocklength")
                sw.axis = mc::Axis::blocklength;
            else if (value == "snr")
                sw.axis = mc::Axis::snr;
            else
                throw ConfigError(key, "must be task_size, blocklength or snr");
            rc.has_axis = true;
        } else if (key == "values") {
            sw.values.clear();
            for (const std::string& item : split_list(value))
                sw.values.push_back(parse_double(key, item));
            if (sw.values.empty()) throw ConfigError(key, "list is empty");
            if (!std::is_sorted(sw.values.begin(), sw.values.end()))
                throw ConfigError(key, "values must be sorted ascending");
        } else if (key == "schemes") {
            sw.run_rsma = false;
            sw.run_noma = false;
            for (const std::string& item : split_list(value)) {
                if (item == "rsma")
                    sw.run_rsma = true;
                else if (item == "noma")
                    sw.run_noma = true;
                else
                    throw ConfigError(key, "unknown scheme '" + item + "'");
            }
        } else if (key == "realizations") {
            const std::int64_t v = parse_int(key, value);
            if (v < 1) throw ConfigError(key, "must be >= 1");
            sw.n_realizations = static_cast<int>(v);
        } else if (key == "seed") {
            sw.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "jobs") {
            sw.jobs = static_cast<int>(parse_int(key, value));
        } else if (key == "snr_db") {
            sw.snr_db = parse_double(key, value);
        } else if (key == "t_budget") {
            sw.base.t_budget = parse_double(key, value);
            require_positive(key, sw.base.t_budget);
        } else if (key == "symbol_duration") {
            sw.base.symbol_duration = parse_double(key, value);
            require_positive(key, sw.base.symbol_duration);
        } else if (key == "blocklength") {
            sw.base.blocklength = parse_int(key, value);
            if (sw.base.blocklength < 1) throw ConfigError(key, "must be >= 1");
        } else if (key == "m1_bits") {
            sw.base.m1_bits = parse_double(key, value);
            require_positive(key, sw.base.m1_bits);
        } else if (key == "m2_bits") {
            sw.base.m2_bits = parse_double(key, value);
            require_positive(key, sw.base.m2_bits);
        } else if (key == "cycles_per_bit") {
            sw.base.cycles_per_bit = parse_double(key, value);
            require_positive(key, sw.base.cycles_per_bit);
        } else if (key == "user_cpu_hz") {
            sw.base.user_cpu_hz = parse_double(key, value);
            require_positive(key, sw.base.user_cpu_hz);
        } else if (key == "mec_speedup") {
            sw.base.mec_speedup = parse_double(key, value);
            if (!(sw.base.mec_speedup > 1.0)) throw ConfigError(key, "must be > 1");
        } else if (key == "noise") {
            sw.base.noise = parse_double(key, value);
            require_positive(key, sw.base.noise);
        } else if (key == "g1") {
            rc.g1 = parse_double(key, value);
            if (!(*rc.g1 >= 0.0)) throw ConfigError(key, "must be >= 0");
        } else if (key == "g2") {
            rc.g2 = parse_double(key, value);
            if (!(*rc.g2 >= 0.0)) throw ConfigError(key, "must be >= 0");
        } else if (key == "tolerance") {
            sw.opts.tolerance = parse_double(key, value);
            require_positive(key, sw.opts.tolerance);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (rc.has_axis && sw.values.empty())
        throw ConfigError("values", "axis set but no values given");
    return rc;
}

}  // namespace rsmec
