#pragma once

#include "rsmec/ao.hpp"
#include "rsmec/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rsmec::mc {

enum class Axis { task_size, blocklength, snr };

const char* axis_name(Axis a);

// Sweep description: one axis, common base configuration, paired channel
// draws shared by every scheme and axis value.
struct SweepSpec {
    Axis axis = Axis::task_size;
    std::vector<double> values;
    SystemConfig base;
    double snr_db = 15.0;  // sets base.power_budget unless axis == snr
    int n_realizations = 100;
    std::uint64_t seed = 1;
    bool run_rsma = true;
    bool run_noma = true;
    int jobs = 1;  // 0 = hardware concurrency
    OptimizeOptions opts;
};

struct SweepRow {
    double axis_value = 0.0;
    std::string scheme;
    double mean_scp = 0.0;
    double stderr_scp = 0.0;
    double mean_iterations = 0.0;
    int infeasible = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // smallest per-realization (rsma - noma) SCP difference seen across
    // the whole sweep; only meaningful when both schemes ran
    double min_scheme_gap = 0.0;
    int solver_failures = 0;
};

// Transmit power that realizes the given SNR against the noise floor.
double transmit_power_for_snr_db(double snr_db, double noise = 1.0);

// Unit-mean Rayleigh-fading power gains (exponential via inverse CDF, so
// the draw sequence depends only on the engine, not on the standard
// library's distribution internals).
ChannelRealization draw_channel(std::mt19937_64& rng, double noise = 1.0);

// Decorrelated substream seed for realization `index`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

SystemConfig config_for(const SweepSpec& spec, double axis_value);

SweepResult run_sweep(const SweepSpec& spec);

// Fixed column order, 6 significant digits; byte-stable for a fixed
// seed and spec.
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace rsmec::mc
