#pragma once

// Command-line front end. run_cli is the whole program; tools/fracsched.cpp
// only forwards argv.
//
// Exit codes: 0 success, 1 schedule rejected by `verify`, 2 usage or input
// error, 3 instance filtered, 4 budget exceeded, 5 internal invariant
// violation.

#include "fracsched/chromatic.hpp"
#include "fracsched/errors.hpp"
#include "fracsched/filter.hpp"
#include "fracsched/harness.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/network.hpp"
#include "fracsched/network_io.hpp"
#include "fracsched/rational.hpp"
#include "fracsched/result_io.hpp"
#include "fracsched/schedule.hpp"

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fracsched {

inline constexpr const char* kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int rejected = 1;
inline constexpr int usage = 2;
inline constexpr int filtered = 3;
inline constexpr int budget = 4;
inline constexpr int internal = 5;
}  // namespace exit_code

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FilteredError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RejectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline Rational parse_flag_rational(const std::string& text, const char* flag) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": '" + text + "' is not a number");
    }
}

struct ParamFlags {
    std::string power_mw = "300";
    std::string noise_mw = "8e-11";
    std::string beta = "316.23";
    std::string alpha = "4";

    void attach(CLI::App& app) {
        app.add_option("--power-mw", power_mw, "transmit power P in mW")->capture_default_str();
        app.add_option("--noise-mw", noise_mw, "noise floor gamma in mW")->capture_default_str();
        app.add_option("--beta", beta, "SINR threshold")->capture_default_str();
        app.add_option("--alpha", alpha, "path-loss exponent")->capture_default_str();
    }

    [[nodiscard]] PhysParams resolve() const {
        PhysParams p;
        p.power_mw = parse_flag_rational(power_mw, "--power-mw");
        p.noise_mw = parse_flag_rational(noise_mw, "--noise-mw");
        p.beta = parse_flag_rational(beta, "--beta");
        p.alpha = parse_flag_rational(alpha, "--alpha");
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

struct LimitFlags {
    std::size_t max_links = 128;
    std::uint64_t max_matchings = 50'000'000;
    double budget_s = 0.0;

    void attach(CLI::App& app, double default_budget) {
        budget_s = default_budget;
        app.add_option("--max-links", max_links, "filter: maximum number of links")->capture_default_str();
        app.add_option("--max-matchings", max_matchings, "filter: maximum number of feasible matchings")
            ->capture_default_str();
        app.add_option("--budget-s", budget_s, "wall-clock budget per instance in seconds, 0 for none")
            ->capture_default_str();
    }

    [[nodiscard]] InstanceLimits resolve() const {
        if (max_links == 0 || max_matchings == 0) throw UsageError("limits must be positive");
        if (max_links > LinkSet::kCapacity)
            throw UsageError("--max-links cannot exceed " + std::to_string(LinkSet::kCapacity));
        if (budget_s < 0) throw UsageError("--budget-s must be non-negative");
        return InstanceLimits{max_links, max_matchings};
    }

    [[nodiscard]] Deadline deadline() const {
        return budget_s > 0 ? Deadline(std::chrono::duration<double>(budget_s)) : Deadline();
    }
};

inline std::string join_args(const std::vector<std::string>& args) {
    std::string out = "fracsched";
    for (const std::string& a : args) out += " " + a;
    return out;
}

/// The argument vector without options that cannot change results (output
/// location, thread count), so reruns elsewhere are byte-identical.
inline std::vector<std::string> result_args(const std::vector<std::string>& args) {
    static constexpr std::array<std::string_view, 2> kIgnored = {"--out-dir", "--jobs"};
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string_view a = args[i];
        bool skip = false;
        for (const std::string_view flag : kIgnored) {
            if (a == flag) {
                skip = true;
                ++i;
            } else if (a.size() > flag.size() && a.starts_with(flag) && a[flag.size()] == '=') {
                skip = true;
            }
        }
        if (!skip) kept.emplace_back(a);
    }
    return kept;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline double ms_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

/// Network and/or family inputs shared by solve, schedule and verify.
struct Instance {
    std::optional<Network> network;
    std::optional<MatchingFamily> family;
    double enum_ms = 0.0;
};

inline Instance load_instance(const std::string& network_path, const std::string& family_path,
                              const InstanceLimits& limits, const Deadline& deadline, bool need_family) {
    if (network_path.empty() && family_path.empty()) throw UsageError("give --network, --family, or both");
    Instance inst;
    if (!network_path.empty()) inst.network = read_network_file(network_path);
    if (!family_path.empty()) {
        inst.family = read_family_file(family_path);
        if (inst.network && inst.family->n_links() != inst.network->link_count())
            throw UsageError("family and network disagree on the number of links");
        return inst;
    }
    const Network& net = *inst.network;
    if (net.link_count() == 0) throw FilteredError(to_string(InstanceStatus::empty));
    if (net.link_count() > limits.max_links) throw FilteredError(to_string(InstanceStatus::too_many_links));
    if (!need_family) return inst;
    InstanceCheck check = classify_instance(net, limits, deadline);
    inst.enum_ms = check.enum_ms;
    if (check.status != InstanceStatus::pass) throw FilteredError(to_string(check.status));
    inst.family = std::move(check.family);
    return inst;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Exact fractional and integer link scheduling under the SINR model", "fracsched"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random network");
    std::size_t gen_nodes = 0;
    std::string gen_side;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    ParamFlags gen_params;
    gen->add_option("--nodes", gen_nodes, "number of nodes (at least 2)")->required();
    gen->add_option("--side-km", gen_side, "side of the deployment square in km")->required();
    gen->add_option("--seed", gen_seed, "64-bit seed")->required();
    gen->add_option("--out", gen_out, "output network file")->required();
    gen_params.attach(*gen);

    // solve
    auto* solve = app.add_subcommand("solve", "compute chromatic indices");
    std::string solve_network, solve_family, solve_mode = "classify", solve_out;
    bool solve_timings = false;
    LimitFlags solve_limits;
    solve->add_option("--network", solve_network, "network file");
    solve->add_option("--family", solve_family, "explicit matching family file (skips enumeration)");
    solve->add_option("--mode", solve_mode, "frac, int, classify or dual")
        ->check(CLI::IsMember({"frac", "int", "classify", "dual"}))
        ->capture_default_str();
    solve->add_option("--out", solve_out, "output JSON file")->required();
    solve->add_flag("--timings", solve_timings, "record wall-clock timings in the result");
    solve_limits.attach(*solve, 0.0);

    // schedule
    auto* sched = app.add_subcommand("schedule", "build and verify the fractional schedule");
    std::string sched_network, sched_family, sched_out;
    LimitFlags sched_limits;
    sched->add_option("--network", sched_network, "network file");
    sched->add_option("--family", sched_family, "explicit matching family file (skips enumeration)");
    sched->add_option("--out", sched_out, "output schedule file")->required();
    sched_limits.attach(*sched, 0.0);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run an instance sweep and write sweep.csv");
    std::string sweep_nodes = "10,20,30", sweep_sides = "1,2,3", sweep_dir;
    std::size_t sweep_instances = 100;
    std::uint64_t sweep_seed = 1;
    bool sweep_full = false, sweep_instances_csv = false, sweep_timings = false;
    unsigned sweep_jobs = 1;
    LimitFlags sweep_limits;
    ParamFlags sweep_params;
    sweep->add_option("--nodes", sweep_nodes, "comma-separated node counts")->capture_default_str();
    sweep->add_option("--sides-km", sweep_sides, "comma-separated side lengths in km")->capture_default_str();
    auto* instances_opt =
        sweep->add_option("--instances", sweep_instances, "instances per cell")->capture_default_str();
    sweep->add_option("--seed", sweep_seed, "master seed")->capture_default_str();
    sweep->add_option("--out-dir", sweep_dir, "output directory")->required();
    sweep->add_flag("--full-grid", sweep_full, "node counts 10..100, sides 1..10 km, 1000 instances");
    sweep->add_flag("--instances-csv", sweep_instances_csv, "also write instances.csv");
    sweep->add_flag("--record-timings", sweep_timings, "fill the timing columns");
    sweep->add_option("--jobs", sweep_jobs, "worker threads")->capture_default_str();
    sweep_limits.attach(*sweep, 300.0);
    sweep_params.attach(*sweep);

    // verify
    auto* verify = app.add_subcommand("verify", "check a schedule file");
    std::string verify_network, verify_family, verify_schedule_path, verify_chi;
    LimitFlags verify_limits;
    verify->add_option("--network", verify_network, "network file");
    verify->add_option("--family", verify_family, "explicit matching family file");
    verify->add_option("--schedule", verify_schedule_path, "schedule file")->required();
    verify->add_option("--chi-star", verify_chi, "claimed fractional index; solved from the instance if omitted");
    verify_limits.attach(*verify, 0.0);

    std::vector<std::string> argv_storage{"fracsched"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        if (*gen) {
            if (gen_nodes < 2) throw UsageError("--nodes must be at least 2");
            const Rational side_km = parse_flag_rational(gen_side, "--side-km");
            if (side_km <= 0) throw UsageError("--side-km must be positive");
            const PhysParams params = gen_params.resolve();
            Network net = [&] {
                try {
                    return generate_network(gen_nodes, side_km * 1000, params, gen_seed);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }();
            write_network_file(net, gen_out);
            out << "links " << net.link_count() << "\n";
            out << "connection_radius_m " << std::fixed << std::setprecision(1) << params.connection_radius_m()
                << "\n";
            return exit_code::ok;
        }

        if (*solve) {
            const InstanceLimits limits = solve_limits.resolve();
            const Deadline deadline = solve_limits.deadline();
            const bool dual_on_network = solve_mode == "dual" && solve_family.empty();
            Instance inst = load_instance(solve_network, solve_family, limits, deadline, !dual_on_network);
            Timings t;
            t.enum_ms = inst.enum_ms;
            nlohmann::json result;
            const auto start = std::chrono::steady_clock::now();
            if (solve_mode == "frac") {
                FractionalResult r = solve_fractional(*inst.family, deadline);
                t.lp_ms = ms_since(start);
                result = fractional_to_json(r, *inst.family, solve_timings ? std::optional(t) : std::nullopt);
            } else if (solve_mode == "int") {
                IntegerResult r = solve_integer(*inst.family, deadline);
                t.ilp_ms = ms_since(start);
                result = integer_to_json(r, *inst.family, solve_timings ? std::optional(t) : std::nullopt);
            } else if (solve_mode == "classify") {
                Classification c = classify(*inst.family, deadline);
                t.lp_ms = c.lp_ms;
                t.ilp_ms = c.ilp_ms;
                result = classification_to_json(c, *inst.family, solve_timings ? std::optional(t) : std::nullopt);
            } else {
                DualResult d = inst.family ? solve_dual_cutgen(*inst.family, deadline)
                                           : solve_dual_cutgen(*inst.network, deadline);
                t.dual_ms = ms_since(start);
                result = dual_to_json(d, solve_timings ? std::optional(t) : std::nullopt);
            }
            write_json_file(solve_out, result);
            if (!result["chi_star"].is_null()) out << "chi_star " << result["chi_star"].get<std::string>() << "\n";
            if (!result["chi_int"].is_null()) out << "chi_int " << result["chi_int"].get<std::size_t>() << "\n";
            if (!result["verdict"].is_null()) out << "verdict " << result["verdict"].get<std::string>() << "\n";
            return exit_code::ok;
        }

        if (*sched) {
            const InstanceLimits limits = sched_limits.resolve();
            const Deadline deadline = sched_limits.deadline();
            Instance inst = load_instance(sched_network, sched_family, limits, deadline, true);
            const Classification c = classify(*inst.family, deadline);
            const Schedule s = build_schedule(c.fractional, *inst.family);
            const ScheduleCheck check = inst.network ? verify_schedule(s, *inst.network) : verify_schedule(s, *inst.family);
            if (!check.ok()) throw std::logic_error("built schedule failed verification: " + check.message);
            // With the shortcut the LP vertex is integral, so chi_int = chi_star.
            const std::size_t chi_int = c.chi_int ? *c.chi_int : numerator(c.chi_star).convert_to<std::size_t>();
            const ScheduleComparison cmp = compare_integer_schedule(s, chi_int);
            write_text_file(sched_out, schedule_to_string(s));
            out << "T " << s.t_star << " q " << s.q_star << "\n";
            out << "chi_star " << to_string(c.chi_star) << "\n";
            out << "chi_int " << chi_int << "\n";
            out << "T1_times_q " << cmp.t1_times_qstar << "\n";
            out << "preferable " << (cmp.preferable ? "true" : "false") << "\n";
            return exit_code::ok;
        }

        if (*sweep) {
            SweepConfig config;
            config.node_counts.clear();
            if (sweep_full) {
                for (std::size_t n = 10; n <= 100; n += 10) config.node_counts.push_back(n);
                for (int d = 1; d <= 10; ++d) config.side_lengths_km.push_back(Rational(d));
                if (instances_opt->count() == 0) sweep_instances = 1000;
            } else {
                for (const std::string& n : split_list(sweep_nodes)) {
                    std::size_t value = 0;
                    try {
                        value = std::stoul(n);
                    } catch (const std::exception&) {
                        throw UsageError("--nodes: '" + n + "' is not a count");
                    }
                    config.node_counts.push_back(value);
                }
                for (const std::string& d : split_list(sweep_sides))
                    config.side_lengths_km.push_back(parse_flag_rational(d, "--sides-km"));
            }
            config.instances_per_cell = sweep_instances;
            config.master_seed = sweep_seed;
            config.limits = sweep_limits.resolve();
            config.budget_s = sweep_limits.budget_s;
            config.params = sweep_params.resolve();
            config.jobs = sweep_jobs;
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            std::error_code ec;
            std::filesystem::create_directories(sweep_dir, ec);
            const std::string sweep_path = (std::filesystem::path(sweep_dir) / "sweep.csv").string();
            {
                std::ofstream probe(sweep_path, std::ios::binary);
                if (!probe) throw UsageError("cannot write to '" + sweep_dir + "'");
            }
            const std::string provenance = std::string("fracsched ") + kToolVersion + " | " + join_args(result_args(args)) +
                                           " | master_seed=" + std::to_string(config.master_seed);
            const std::vector<CellStats> cells = run_sweep(config, [&](const CellStats& c) {
                err << "cell n=" << c.n_nodes << " d=" << decimal_string(c.side_km) << "km pass=" << c.n_pass
                    << " strict=" << c.n_strict << "\n";
            });
            write_text_file(sweep_path, sweep_csv(cells, provenance, sweep_timings));
            if (sweep_instances_csv)
                write_text_file((std::filesystem::path(sweep_dir) / "instances.csv").string(),
                                instances_csv(cells, provenance));
            out << "wrote " << sweep_path << "\n";
            return exit_code::ok;
        }

        if (*verify) {
            const InstanceLimits limits = verify_limits.resolve();
            const Deadline deadline = verify_limits.deadline();
            const bool need_family = verify_network.empty() || verify_chi.empty();
            Instance inst = load_instance(verify_network, verify_family, limits, deadline, need_family);
            Schedule s = read_schedule_file(verify_schedule_path);
            s.chi_star = verify_chi.empty() ? solve_fractional(*inst.family, deadline).chi_star
                                            : parse_flag_rational(verify_chi, "--chi-star");
            const ScheduleCheck check = inst.network ? verify_schedule(s, *inst.network) : verify_schedule(s, *inst.family);
            if (check.ok()) {
                out << "ok\n";
                return exit_code::ok;
            }
            out << "violation " << to_string(check.kind);
            if (check.slot) out << " slot " << *check.slot;
            if (check.link) out << " link " << *check.link;
            out << "\n";
            throw RejectedError(check.message);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const FilteredError& e) {
        err << "filtered: " << e.what() << "\n";
        return exit_code::filtered;
    } catch (const RejectedError& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return exit_code::budget;
    } catch (const std::logic_error& e) {
        // invalid_argument derives from logic_error but means bad input.
        if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::length_error*>(&e)) {
            err << "input error: " << e.what() << "\n";
            return exit_code::usage;
        }
        err << "internal error: " << e.what() << "\n";
        return exit_code::internal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
    return exit_code::usage;
}

}  // namespace fracsched
