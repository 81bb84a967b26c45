#include "rsmec/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rsmec::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential1(std::mt19937_64& rng) {
    return -std::log1p(-uniform01(rng));
}

struct RealizationOutcome {
    double scp = 0.0;
    double iterations = 0.0;
    bool infeasible = false;
    bool failed = false;
};

RealizationOutcome evaluate(const SystemConfig& cfg, const ChannelRealization& ch,
                            bool rsma, const OptimizeOptions& opts) {
    RealizationOutcome out;
    try {
        const OptimizeResult r =
            rsma ? optimize(cfg, ch, opts) : optimize_noma(cfg, ch, opts);
        out.scp = r.scp.scp;
        out.iterations = static_cast<double>(r.trace.iterations);
        out.infeasible = !r.scp.feasible;
    } catch (const std::exception&) {
        // count the instance as a failure with SCP 0 and keep sweeping
        out.scp = 0.0;
        out.infeasible = true;
        out.failed = true;
    }
    return out;
}

SweepRow reduce_rows(double axis_value, const char* scheme,
                     const std::vector<RealizationOutcome>& outcomes) {
    SweepRow row;
    row.axis_value = axis_value;
    row.scheme = scheme;
    const int n = static_cast<int>(outcomes.size());
    double sum = 0.0, sum_iter = 0.0;
    for (const auto& o : outcomes) {
        sum += o.scp;
        sum_iter += o.iterations;
        if (o.infeasible) ++row.infeasible;
    }
    row.mean_scp = sum / n;
    row.mean_iterations = sum_iter / n;
    if (n > 1) {
        double ss = 0.0;
        for (const auto& o : outcomes) {
            const double d = o.scp - row.mean_scp;
            ss += d * d;
        }
        row.stderr_scp = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return row;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += jobs) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::task_size: return "task_size";
        case Axis::blocklength: return "blocklength";
        case Axis::snr: return "snr";
    }
    return "?";
}

double transmit_power_for_snr_db(double snr_db, double noise) {
    return noise * std::pow(10.0, snr_db / 10.0);
}

ChannelRealization draw_channel(std::mt19937_64& rng, double noise) {
    ChannelRealization ch;
    ch.g1 = exponential1(rng);
    ch.g2 = exponential1(rng);
    ch.noise = noise;
    return ch;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
    std::uint64_t s = splitmix64(state);
    return s ^ splitmix64(state);
}

SystemConfig config_for(const SweepSpec& spec, double axis_value) {
    SystemConfig cfg = spec.base;
    cfg.power_budget = transmit_power_for_snr_db(spec.snr_db, cfg.noise);
    switch (spec.axis) {
        case Axis::task_size:
            cfg.m1_bits = axis_value;
            break;
        case Axis::blocklength:
            cfg.blocklength = static_cast<std::int64_t>(std::llround(axis_value));
            break;
        case Axis::snr:
            cfg.power_budget = transmit_power_for_snr_db(axis_value, cfg.noise);
            break;
    }
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty())
        throw std::invalid_argument("run_sweep: values must not be empty");
    if (spec.n_realizations < 1)
        throw std::invalid_argument("run_sweep: n_realizations must be >= 1");
    if (!spec.run_rsma && !spec.run_noma)
        throw std::invalid_argument("run_sweep: no scheme selected");

    const int n = spec.n_realizations;
    std::vector<ChannelRealization> channels(n);
    for (int r = 0; r < n; ++r) {
        std::mt19937_64 rng(substream_seed(spec.seed, static_cast<std::uint64_t>(r)));
        channels[r] = draw_channel(rng, spec.base.noise);
    }

    SweepResult result;
    result.min_scheme_gap = spec.run_rsma && spec.run_noma
                                ? std::numeric_limits<double>::infinity()
                                : 0.0;

    for (double value : spec.values) {
        const SystemConfig cfg = config_for(spec, value);
        std::vector<RealizationOutcome> rsma(n), noma(n);
        parallel_for(n, spec.jobs, [&](int r) {
            if (spec.run_rsma) rsma[r] = evaluate(cfg, channels[r], true, spec.opts);
            if (spec.run_noma) noma[r] = evaluate(cfg, channels[r], false, spec.opts);
        });
        if (spec.run_rsma) {
            result.rows.push_back(reduce_rows(value, "rsma", rsma));
            for (const auto& o : rsma) result.solver_failures += o.failed ? 1 : 0;
        }
        if (spec.run_noma) {
            result.rows.push_back(reduce_rows(value, "noma", noma));
            for (const auto& o : noma) result.solver_failures += o.failed ? 1 : 0;
        }
        if (spec.run_rsma && spec.run_noma) {
            for (int r = 0; r < n; ++r)
                result.min_scheme_gap =
                    std::min(result.min_scheme_gap, rsma[r].scp - noma[r].scp);
        }
    }
    return result;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis,scheme,mean_scp,stderr,mean_iters,infeasible\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6g,%s,%.6g,%.6g,%.6g,%d\n", r.axis_value,
                      r.scheme.c_str(), r.mean_scp, r.stderr_scp, r.mean_iterations,
                      r.infeasible);
        out += buf;
    }
    return out;
}

}  // namespace rsmec::mc
