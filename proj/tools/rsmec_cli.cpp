// Command-line front end: single-instance optimization, Monte Carlo
// sweeps, scheme comparison and the brute-force cross-check.

#include "rsmec/ao.hpp"
#include "rsmec/config.hpp"
#include "rsmec/mc.hpp"
#include "rsmec/mec.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

namespace {

using namespace rsmec;

RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return default_config();
    return load_config(path);
}

ChannelRealization instance_channel(const RunConfig& rc) {
    if (rc.g1 && rc.g2) return {*rc.g1, *rc.g2, rc.sweep.base.noise};
    std::mt19937_64 rng(mc::substream_seed(rc.sweep.seed, 0));
    return mc::draw_channel(rng, rc.sweep.base.noise);
}

SystemConfig instance_config(const RunConfig& rc) {
    SystemConfig cfg = rc.sweep.base;
    cfg.power_budget = mc::transmit_power_for_snr_db(rc.sweep.snr_db, cfg.noise);
    return cfg;
}

void print_allocation(const OptimizeResult& r) {
    std::printf("lambda   = (%.6g, %.6g)\n", r.alloc.lambda.lambda1,
                r.alloc.lambda.lambda2);
    std::printf("power    = (p11 %.6g, p12 %.6g, p2 %.6g)\n", r.alloc.power.p11,
                r.alloc.power.p12, r.alloc.power.p2);
    std::printf("beta     = %.6g\n", r.alloc.split.beta_a);
    std::printf("scp      = %.6g  (feasible: %s, eps1 %.3g, eps2 %.3g)\n", r.scp.scp,
                r.scp.feasible ? "yes" : "no", r.scp.eps1, r.scp.eps2);
    std::printf("timing   = t2 %.6g s, t3 %.6g s\n", r.scp.t2, r.scp.t3);
    std::printf("iters    = %d (%s, %.3f s)\n", r.trace.iterations,
                r.trace.converged ? "converged" : "iteration cap",
                r.trace.wall_seconds);
    if (!r.trace.objective.empty()) {
        std::printf("trace    =");
        for (double v : r.trace.objective) std::printf(" %.6g", v);
        std::printf("\n");
    }
}

int cmd_optimize(const RunConfig& rc, const std::string& scheme) {
    const SystemConfig cfg = instance_config(rc);
    const ChannelRealization ch = instance_channel(rc);
    std::printf("channel  = (g1 %.6g, g2 %.6g, noise %.6g), Pt %.6g\n", ch.g1, ch.g2,
                ch.noise, cfg.power_budget);
    const OptimizeResult r = scheme == "noma" ? optimize_noma(cfg, ch, rc.sweep.opts)
                                              : optimize(cfg, ch, rc.sweep.opts);
    print_allocation(r);
    return 0;
}

int cmd_oracle(const RunConfig& rc, int density) {
    const SystemConfig cfg = instance_config(rc);
    const ChannelRealization ch = instance_channel(rc);
    const OptimizeResult ao = optimize(cfg, ch, rc.sweep.opts);
    const OptimizeResult oracle = brute_force_oracle(cfg, ch, density);
    std::printf("alternating optimizer:\n");
    print_allocation(ao);
    std::printf("\nbrute force (density %d):\n", density);
    print_allocation(oracle);
    std::printf("\n|scp_ao - scp_oracle| = %.6g\n",
                std::abs(ao.scp.scp - oracle.scp.scp));
    return 0;
}

int cmd_sweep(const RunConfig& rc, const std::string& out_path) {
    if (!rc.has_axis) throw ConfigError("axis", "sweep requires an axis");
    const mc::SweepResult res = mc::run_sweep(rc.sweep);
    const std::string csv = mc::to_csv(res.rows);
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("out", "cannot write '" + out_path + "'");
        out << csv;
        std::printf("wrote %zu rows to %s\n", res.rows.size(), out_path.c_str());
    }
    if (res.solver_failures > 0)
        std::fprintf(stderr, "warning: %d instances failed and were counted as scp=0\n",
                     res.solver_failures);
    return 0;
}

int cmd_compare(const RunConfig& rc) {
    mc::SweepSpec spec = rc.sweep;
    spec.run_rsma = true;
    spec.run_noma = true;
    if (!rc.has_axis) {
        spec.axis = mc::Axis::task_size;
        spec.values = {spec.base.m1_bits};
    }
    const mc::SweepResult res = mc::run_sweep(spec);
    std::printf("%-12s %-6s %-10s %-10s %-10s %s\n", "axis", "scheme", "mean_scp",
                "stderr", "mean_iters", "infeasible");
    for (const auto& row : res.rows)
        std::printf("%-12.6g %-6s %-10.6g %-10.6g %-10.6g %d\n", row.axis_value,
                    row.scheme.c_str(), row.mean_scp, row.stderr_scp,
                    row.mean_iterations, row.infeasible);
    std::printf("min per-realization (rsma - noma) gap: %.3g\n", res.min_scheme_gap);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Successful-computation-probability optimizer for two-user uplink "
                 "rate-splitting MEC offloading under finite blocklength"};
    app.require_subcommand(1);

    std::string config_path, out_path, scheme = "rsma";
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    int density = 33;

    auto* opt = app.add_subcommand("optimize", "optimize one channel instance");
    opt->add_option("--config", config_path, "flat key = value configuration file");
    opt->add_option("--seed", seed, "RNG seed for the channel draw");
    opt->add_option("--scheme", scheme, "rsma or noma")
        ->check(CLI::IsMember({"rsma", "noma"}));

    auto* swp = app.add_subcommand("sweep", "run a Monte Carlo sweep, emit CSV");
    swp->add_option("--config", config_path, "flat key = value configuration file");
    swp->add_option("--seed", seed, "RNG seed");
    swp->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    swp->add_option("--jobs", jobs, "worker threads (0 = auto)");

    auto* cmp = app.add_subcommand("compare", "RSMA vs NOMA summary table");
    cmp->add_option("--config", config_path, "flat key = value configuration file");
    cmp->add_option("--seed", seed, "RNG seed");
    cmp->add_option("--jobs", jobs, "worker threads (0 = auto)");

    auto* orc = app.add_subcommand("oracle", "brute-force check on one instance");
    orc->add_option("--config", config_path, "flat key = value configuration file");
    orc->add_option("--seed", seed, "RNG seed for the channel draw");
    orc->add_option("--density", density, "grid density per axis (>= 17)")
        ->check(CLI::Range(17, 501));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        rsmec::RunConfig rc = load_or_default(config_path);
        if (seed) rc.sweep.seed = *seed;
        if (jobs) rc.sweep.jobs = *jobs;
        if (opt->parsed()) return cmd_optimize(rc, scheme);
        if (swp->parsed()) return cmd_sweep(rc, out_path);
        if (cmp->parsed()) return cmd_compare(rc);
        if (orc->parsed()) return cmd_oracle(rc, density);
    } catch (const rsmec::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 0;
}
