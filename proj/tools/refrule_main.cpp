#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "refrule/acoe.hpp"
#include "refrule/anchor.hpp"
#include "refrule/bilateral.hpp"
#include "refrule/config.hpp"
#include "refrule/parallel.hpp"
#include "refrule/simulator.hpp"
#include "refrule/uniform_analytics.hpp"
#include "refrule/verify.hpp"

using json = nlohmann::ordered_json;
using namespace refrule;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

json estimate_json(const Estimate& e) {
    return json{{"value", e.value}, {"std_error", e.std_error}};
}

json stats_json(const PathStats& s) {
    json atoms = json::array();
    for (const auto& a : s.histogram.atoms)
        atoms.push_back(json{{"location", a.location}, {"mass", a.mass}});
    return json{{"mean", estimate_json(s.mean)},
                {"variance", estimate_json(s.variance)},
                {"qv", estimate_json(s.qv)},
                {"avg_cost", estimate_json(s.avg_cost)},
                {"pth_moment", estimate_json(s.pth_moment)},
                {"atoms", atoms},
                {"diverged", s.diverged},
                {"retained_steps", s.retained_steps},
                {"replications", s.replications}};
}

json dynamics_json(const DynamicsSpec& d) {
    return json{{"a", to_config_string(d.persistence)},
                {"b", to_config_string(d.drift)},
                {"base", to_config_string(d.base)},
                {"p", d.moment_order},
                {"random_walk", d.random_walk}};
}

json sim_json(const SimConfig& c) {
    json j{{"steps", c.steps},
           {"burnin", c.resolved_burnin()},
           {"replications", c.replications},
           {"seed", c.seed},
           {"hist_bins", c.hist_bins},
           {"threads", resolve_threads(c.threads)}};
    if (c.initial_action)
        j["initial"] = *c.initial_action;
    else
        j["initial"] = "auto";
    return j;
}

json run_config_json(const LoadedConfig& cfg) {
    return json{{"dynamics", dynamics_json(cfg.dynamics)},
                {"policy", to_config_string(cfg.policy)},
                {"cost", to_config_string(cfg.cost)},
                {"sim", sim_json(cfg.sim)}};
}

std::string hist_csv(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,mass\n";
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i)
        out += fmt17(h.edges[i]) + "," + fmt17(h.edges[i + 1]) + "," + fmt17(h.masses[i]) + "\n";
    for (const auto& a : h.atoms) out += fmt17(a.location) + "," + fmt17(a.mass) + "\n";
    return out;
}

std::string path_csv(const std::vector<PathPoint>& path) {
    std::string out = "t,lo,hi,action\n";
    for (const auto& p : path)
        out += std::to_string(p.t) + "," + fmt17(p.lo) + "," + fmt17(p.hi) + "," +
               fmt17(p.action) + "\n";
    return out;
}

std::string solution_csv(const ValueSolution& sol) {
    std::string out = "s,h,r_star\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        out += fmt17(sol.grid[i]) + "," + fmt17(sol.relative_value[i]) + "," +
               fmt17(sol.targets[i]) + "\n";
    return out;
}

std::string prices_csv(const std::vector<PriceRow>& rows) {
    std::string out = "t,v,c,price_kda,price_pooling\n";
    for (const auto& r : rows) {
        out += std::to_string(r.t) + "," + fmt17(r.v) + "," + fmt17(r.c) + ",";
        if (r.linear_da_price) out += fmt17(*r.linear_da_price);
        out += ",";
        if (r.pooling_price) out += fmt17(*r.pooling_price);
        out += "\n";
    }
    return out;
}

std::string sidecar_path(const std::string& csv_path) {
    auto dot = csv_path.rfind('.');
    auto slash = csv_path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    void attach(CLI::App* cmd, bool config_required = false) {
        auto* c = cmd->add_option("--config", config_path, "run configuration file");
        if (config_required) c->required();
        cmd->add_option("--seed", seed, "override the configured seed");
        cmd->add_option("--threads", threads, "worker threads (0 = machine parallelism)");
    }

    LoadedConfig load() const {
        LoadedConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) {
            cfg.sim.seed = *seed;
            cfg.acoe.seed = *seed;
            cfg.anchor.seed = *seed;
        }
        if (threads) {
            cfg.sim.threads = *threads;
            cfg.acoe.threads = *threads;
        }
        return cfg;
    }
};

int cmd_simulate(const CommonFlags& flags, const std::string& out_stats,
                 const std::string& out_hist, const std::string& out_path) {
    LoadedConfig cfg = flags.load();
    std::vector<PathPoint> path;
    PathStats stats =
        run(cfg.dynamics, cfg.policy, cfg.cost, cfg.sim, out_path.empty() ? nullptr : &path);
    json doc{{"schema", 1}, {"command", "simulate"}, {"config", run_config_json(cfg)},
             {"stats", stats_json(stats)}};
    std::string text = doc.dump(2) + "\n";
    if (!out_stats.empty()) write_text_file(out_stats, text);
    if (!out_hist.empty()) write_text_file(out_hist, hist_csv(stats.histogram));
    if (!out_path.empty()) write_text_file(out_path, path_csv(path));
    std::cout << text;
    if (stats.diverged) {
        std::cerr << "simulate: path diverged (non-finite action)\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_compare(const CommonFlags& flags, const std::string& policies_arg,
                const std::string& out_stats) {
    LoadedConfig cfg = flags.load();
    std::vector<std::string> labels;
    std::vector<Policy> policies;
    if (policies_arg.empty()) {
        labels = {"mid", "anchor(0.5)", "statusquo"};
        policies = {midpoint_rule(), Policy{Anchor{0.5}}, Policy{StatusQuo{}}};
    } else {
        std::string::size_type start = 0;
        while (start <= policies_arg.size()) {
            auto end = policies_arg.find(';', start);
            if (end == std::string::npos) end = policies_arg.size();
            std::string piece = policies_arg.substr(start, end - start);
            if (!piece.empty()) {
                policies.push_back(parse_policy(piece));
                labels.push_back(to_config_string(policies.back()));
            }
            start = end + 1;
        }
        if (policies.empty()) throw ConfigError("--policies: no policies given");
    }
    auto table = compare(cfg.dynamics, policies, cfg.cost, cfg.sim);
    json rows = json::array();
    bool diverged = false;
    for (std::size_t i = 0; i < table.size(); ++i) {
        rows.push_back(json{{"policy", labels[i]}, {"stats", stats_json(table[i])}});
        diverged = diverged || table[i].diverged;
    }
    json doc{{"schema", 1}, {"command", "compare"}, {"config", run_config_json(cfg)},
             {"table", rows}};
    std::string text = doc.dump(2) + "\n";
    if (!out_stats.empty()) write_text_file(out_stats, text);
    std::cout << text;
    if (diverged) {
        std::cerr << "compare: a path diverged (non-finite action)\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_solve_acoe(const CommonFlags& flags, const std::string& out_solution) {
    LoadedConfig cfg = flags.load();
    ValueSolution sol = solve(cfg.dynamics, cfg.acoe_state_range, cfg.cost, cfg.acoe);
    json doc{{"schema", 1},
             {"command", "solve-acoe"},
             {"config",
              json{{"dynamics", dynamics_json(cfg.dynamics)},
                   {"cost", to_config_string(cfg.cost)},
                   {"state_range", json::array({sol.state_range.lo, sol.state_range.hi})},
                   {"grid_size", cfg.acoe.grid_size},
                   {"noise_samples", cfg.acoe.noise_samples},
                   {"tolerance", cfg.acoe.tolerance},
                   {"max_sweeps", cfg.acoe.max_sweeps},
                   {"seed", cfg.acoe.seed},
                   {"threads", resolve_threads(cfg.acoe.threads)}}},
             {"rho", sol.rho},
             {"sweeps", sol.sweeps},
             {"converged", sol.converged},
             {"interior_slope", target_slope(sol)}};
    if (!out_solution.empty()) {
        write_text_file(out_solution, solution_csv(sol));
        json sidecar{{"rho", sol.rho}, {"sweeps", sol.sweeps}, {"converged", sol.converged}};
        write_text_file(sidecar_path(out_solution), sidecar.dump(2) + "\n");
    }
    std::cout << doc.dump(2) << "\n";
    if (!sol.converged) {
        std::cerr << "solve-acoe: not converged after " << sol.sweeps << " sweeps\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_anchor(const CommonFlags& flags) {
    LoadedConfig cfg = flags.load();
    AnchorSolution sol =
        solve_anchor(cfg.dynamics, cfg.anchor.tol, cfg.anchor.n_samples, cfg.anchor.seed);
    json doc{{"schema", 1},
             {"command", "anchor"},
             {"config", json{{"dynamics", dynamics_json(cfg.dynamics)},
                             {"n_samples", cfg.anchor.n_samples},
                             {"tol", cfg.anchor.tol},
                             {"seed", cfg.anchor.seed}}},
             {"z_star", sol.z_star},
             {"variance", sol.variance_at_z},
             {"balance", sol.balance_at_z},
             {"curvature", sol.curvature_at_z},
             {"converged", sol.converged}};
    if (sol.flat_interval)
        doc["flat_interval"] = json::array({sol.flat_interval->lo, sol.flat_interval->hi});
    if (sol.converged) {
        auto sc = self_consistency_check(cfg.dynamics, sol.z_star, cfg.anchor.n_samples,
                                         cfg.anchor.seed + 1);
        doc["self_consistency_gap"] = sc.gap;
        doc["self_consistency_se"] = sc.std_error;
    }
    std::cout << doc.dump(2) << "\n";
    if (!sol.converged) {
        std::cerr << "anchor: " << sol.diagnostics << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_analytic_uniform() {
    UniformBenchmarkTable t = analytic_table();
    json doc{{"schema", 1},          {"command", "analytic uniform"},
             {"qv_midpoint", t.qv_midpoint},   {"var_midpoint", t.var_midpoint},
             {"qv_anchor", t.qv_anchor},       {"var_anchor", t.var_anchor},
             {"qv_inertia", t.qv_inertia},     {"var_inertia", t.var_inertia}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_bilateral_best_response(double v, double ref) {
    BuyerBestResponse r = best_response(v, ref);
    json doc{{"schema", 1},
             {"command", "bilateral best-response"},
             {"v", v},
             {"ref", ref},
             {"bid", r.bid},
             {"regime", r.regime == BuyerRegime::Monopsony ? "monopsony" : "price_taking"},
             {"utility", r.utility}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_bilateral_threshold(double ref) {
    BuyerThreshold t = buyer_threshold(ref);
    json doc{{"schema", 1},
             {"command", "bilateral threshold"},
             {"ref", ref},
             {"threshold", t.value},
             {"switches", t.switches}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_bilateral_welfare(double ref, long samples, std::uint64_t seed) {
    WelfareTable t = welfare(ref, samples, seed);
    auto row = [](const WelfareRow& r) {
        return json{{"exact", r.exact}, {"mc", r.mc}, {"mc_std_error", r.mc_std_error}};
    };
    json doc{{"schema", 1},
             {"command", "bilateral welfare"},
             {"config", json{{"ref", ref}, {"samples", samples}, {"seed", seed}}},
             {"first_best", row(t.first_best)},
             {"linear_equilibrium", row(t.linear_equilibrium)},
             {"posted_price", row(t.posted_price)},
             {"pooling", row(t.pooling)},
             {"optimal_posted_price", optimal_posted_price()}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_bilateral_simulate(long steps, double ref, std::uint64_t seed, const std::string& out) {
    auto rows = simulate_prices(steps, ref, seed);
    long kda_trades = 0, pooling_trades = 0;
    for (const auto& r : rows) {
        if (r.linear_da_price) ++kda_trades;
        if (r.pooling_price) ++pooling_trades;
    }
    if (!out.empty()) write_text_file(out, prices_csv(rows));
    json doc{{"schema", 1},
             {"command", "bilateral simulate"},
             {"config", json{{"steps", steps}, {"ref", ref}, {"seed", seed}}},
             {"linear_da_trades", kda_trades},
             {"pooling_trades", pooling_trades},
             {"linear_da_frequency",
              steps > 0 ? static_cast<double>(kda_trades) / static_cast<double>(steps) : 0.0},
             {"exact_linear_da_frequency", linear_da_trade_frequency()}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(bool fast, int threads) {
    VerifyOptions opt;
    opt.fast = fast;
    opt.threads = threads;
    auto results = run_verification(opt);
    json criteria = json::array();
    for (const auto& r : results) {
        std::fprintf(stderr, "criterion %d: %s  %s (%.1f s)\n", r.id,
                     r.pass ? "pass" : "FAIL", r.title.c_str(), r.seconds);
        json checks = json::array();
        for (const auto& c : r.checks) {
            if (!c.pass)
                std::fprintf(stderr, "  FAIL %s: %s\n", c.name.c_str(), c.detail.c_str());
            checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        }
        criteria.push_back(json{{"id", r.id},
                                {"title", r.title},
                                {"pass", r.pass},
                                {"seconds", r.seconds},
                                {"checks", checks}});
    }
    bool ok = all_pass(results);
    json doc{{"schema", 1},
             {"command", "verify"},
             {"fast", fast},
             {"criteria", criteria},
             {"all_pass", ok}};
    std::cout << doc.dump(2) << "\n";
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reference-rule simulation and analysis toolkit"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    std::string out_stats, out_hist, out_path;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate one rule and report path statistics");
    sim_flags.attach(sim_cmd, true);
    sim_cmd->add_option("--out-stats", out_stats, "write the JSON summary here too");
    sim_cmd->add_option("--out-hist", out_hist, "stationary histogram CSV");
    sim_cmd->add_option("--out-path", out_path, "first replication trajectory CSV");

    CommonFlags cmp_flags;
    std::string policies_arg, cmp_out;
    auto* cmp_cmd =
        app.add_subcommand("compare", "run several rules against common interval draws");
    cmp_flags.attach(cmp_cmd, true);
    cmp_cmd->add_option("--policies", policies_arg,
                        "semicolon-separated rules, e.g. \"statusquo;anchor(0.5);mid\"");
    cmp_cmd->add_option("--out-stats", cmp_out, "write the JSON table here too");

    CommonFlags acoe_flags;
    std::string out_solution;
    auto* acoe_cmd =
        app.add_subcommand("solve-acoe", "average-cost optimality equation on a state grid");
    acoe_flags.attach(acoe_cmd, true);
    acoe_cmd->add_option("--out-solution", out_solution, "solution table CSV (+ JSON sidecar)");

    CommonFlags anchor_flags;
    auto* anchor_cmd =
        app.add_subcommand("anchor", "variance-minimizing fixed anchor of the interval law");
    anchor_flags.attach(anchor_cmd, true);

    auto* analytic_cmd = app.add_subcommand("analytic", "closed-form reference values");
    auto* analytic_uniform = analytic_cmd->add_subcommand(
        "uniform", "stationary moments of the uniform benchmark");
    analytic_cmd->require_subcommand(1);

    auto* bil_cmd = app.add_subcommand("bilateral", "reference-price bilateral trade");
    bil_cmd->require_subcommand(1);
    double bil_v = 0.5, bil_ref = 0.5;
    auto* br_cmd = bil_cmd->add_subcommand("best-response", "buyer best reply to a sincere seller");
    br_cmd->add_option("--v", bil_v, "buyer valuation")->required();
    br_cmd->add_option("--ref", bil_ref, "reference price")->required();
    double thr_ref = 0.5;
    auto* thr_cmd = bil_cmd->add_subcommand("threshold", "regime-switch valuation");
    thr_cmd->add_option("--ref", thr_ref, "reference price")->required();
    double wel_ref = 0.5;
    long wel_samples = 1000000;
    std::uint64_t wel_seed = 42;
    auto* wel_cmd = bil_cmd->add_subcommand("welfare", "welfare of four trading mechanisms");
    wel_cmd->add_option("--ref", wel_ref, "reference price");
    wel_cmd->add_option("--samples", wel_samples, "Monte Carlo draws");
    wel_cmd->add_option("--seed", wel_seed, "Monte Carlo seed");
    long bsim_steps = 1000;
    double bsim_ref = 0.5;
    std::uint64_t bsim_seed = 42;
    std::string bsim_out;
    auto* bsim_cmd = bil_cmd->add_subcommand("simulate", "period-by-period trade prices");
    bsim_cmd->add_option("--steps", bsim_steps, "number of trading periods")->required();
    bsim_cmd->add_option("--ref", bsim_ref, "reference price");
    bsim_cmd->add_option("--seed", bsim_seed, "draw seed");
    bsim_cmd->add_option("--out", bsim_out, "prices CSV path");

    bool verify_fast = false;
    int verify_threads = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run the full acceptance suite");
    verify_cmd->add_flag("--fast", verify_fast, "reduced sample sizes (smoke run)");
    verify_cmd->add_option("--threads", verify_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim_cmd->parsed()) return cmd_simulate(sim_flags, out_stats, out_hist, out_path);
        if (cmp_cmd->parsed()) return cmd_compare(cmp_flags, policies_arg, cmp_out);
        if (acoe_cmd->parsed()) return cmd_solve_acoe(acoe_flags, out_solution);
        if (anchor_cmd->parsed()) return cmd_anchor(anchor_flags);
        if (analytic_cmd->parsed() && analytic_uniform->parsed()) return cmd_analytic_uniform();
        if (bil_cmd->parsed()) {
            if (br_cmd->parsed()) return cmd_bilateral_best_response(bil_v, bil_ref);
            if (thr_cmd->parsed()) return cmd_bilateral_threshold(thr_ref);
            if (wel_cmd->parsed()) return cmd_bilateral_welfare(wel_ref, wel_samples, wel_seed);
            if (bsim_cmd->parsed())
                return cmd_bilateral_simulate(bsim_steps, bsim_ref, bsim_seed, bsim_out);
        }
        if (verify_cmd->parsed()) return cmd_verify(verify_fast, verify_threads);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    std::cerr << "error: no subcommand\n";
    return kExitConfig;
}
