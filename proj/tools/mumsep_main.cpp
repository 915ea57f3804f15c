// Command-line front end: build/verify measurement sets, generate states,
// evaluate criteria, run isotropic threshold scans, and run separable
// soundness sweeps.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 verification or
// positivity failure, 4 numeric-integrity error, 5 soundness regression.
// All randomness flows from --seed; identical flags produce byte-identical
// output files.

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mumsep/mumsep.hpp"

namespace {

using namespace mumsep;

std::string dims_to_string(const std::vector<int>& dims) {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(dims[i]);
    }
    return s;
}

int run_mums_build(int d, std::optional<double> t, std::string out) {
    const MumSet s = build_mums(d, t);
    if (out.empty()) out = "mums_d" + std::to_string(d) + ".json";
    save_mum_set(out, s);
    std::cout << "d=" << s.d << " M=" << s.M << " t=" << fmt_g17(s.t)
              << " kappa=" << fmt_g17(s.kappa) << " out=" << out << "\n";
    return 0;
}

int run_mums_verify(const std::string& in, double tol) {
    const MumSet s = load_mum_set(in);
    const MumVerification v = verify_mums(s, tol);
    std::cout << "unit_trace=" << fmt_g12(v.unit_trace) << "\n"
              << "hermiticity=" << fmt_g12(v.hermiticity) << "\n"
              << "positivity=" << fmt_g12(v.positivity) << "\n"
              << "completeness=" << fmt_g12(v.completeness) << "\n"
              << "trace_relations=" << fmt_g12(v.trace_relations) << "\n"
              << "kappa_consistency=" << fmt_g12(v.kappa_consistency) << "\n"
              << "kappa_in_range=" << (v.kappa_in_range ? "true" : "false")
              << " (kappa=" << fmt_g12(s.kappa) << ", 1/d=" << fmt_g12(1.0 / s.d) << ")\n";
    const bool ok = v.pass(tol);
    std::cout << "result=" << (ok ? "pass" : "fail") << " tol=" << fmt_g12(tol) << "\n";
    return ok ? 0 : 3;
}

int run_state_gen(const std::string& kind, std::vector<int> dims, int d, int m, double p,
                  int terms, std::uint64_t seed, std::string out) {
    DensityMatrix rho{{}, ComplexMatrix(1)};
    if (kind == "mixed") {
        if (dims.empty()) throw config_error("state gen mixed: --dims required");
        rho = maximally_mixed(dims);
    } else if (kind == "isotropic") {
        if (d < 2) throw config_error("state gen isotropic: --d required (>= 2)");
        rho = isotropic(d, p);
    } else if (kind == "ghz") {
        if (d < 2 || m < 2) throw config_error("state gen ghz: --d and --m required (>= 2)");
        rho = ghz(d, m);
    } else if (kind == "noisy-ghz") {
        if (d < 2 || m < 2) throw config_error("state gen noisy-ghz: --d and --m required (>= 2)");
        rho = noisy_ghz(d, m, p);
    } else if (kind == "random") {
        if (dims.empty()) throw config_error("state gen random: --dims required");
        rho = random_density(dims, seed);
    } else if (kind == "product") {
        if (dims.empty()) throw config_error("state gen product: --dims required");
        rho = random_product(dims, seed);
    } else if (kind == "separable") {
        if (dims.empty()) throw config_error("state gen separable: --dims required");
        rho = random_separable(dims, terms, seed);
    } else {
        throw config_error("state gen: unknown kind '" + kind +
                           "' (mixed|isotropic|ghz|noisy-ghz|random|product|separable)");
    }
    if (out.empty()) out = "state_" + kind + ".json";
    save_density(out, rho);
    std::cout << "kind=" << kind << " dims=" << dims_to_string(rho.dims)
              << " purity=" << fmt_g17(purity(rho)) << " out=" << out << "\n";
    return 0;
}

int run_crit_eval(const std::string& theorem_name, const std::string& state_path,
                  const std::vector<std::string>& set_paths, const std::string& strategy_name) {
    const TheoremId theorem = theorem_from_string(theorem_name);
    const Strategy strategy = strategy_from_string(strategy_name);
    const DensityMatrix rho = load_density(state_path);

    CriterionReport report;
    if (theorem == TheoremId::MUB) {
        if (rho.dims.size() != 2 || rho.dims[0] != rho.dims[1])
            throw config_error("MUB baseline needs a (d, d) state");
        const auto bases = mub_prime(rho.dims[0]);
        const MubIndexResult res = mub_index(bases, rho);
        report.theorem = TheoremId::MUB;
        report.J = res.value;
        report.bound = res.bound;
        report.margin = res.value - res.bound;
        report.detected = report.margin > report.tol_detect;
        report.strategy = Strategy::diagonal;
        report.dims = rho.dims;
        report.M = static_cast<int>(bases.size());
    } else {
        std::vector<MumSet> sets;
        if (set_paths.empty()) {
            sets = default_sets(rho.dims);
        } else {
            sets.reserve(set_paths.size());
            for (const std::string& path : set_paths) sets.push_back(load_mum_set(path));
        }
        report = evaluate_theorem(theorem, sets, rho, strategy);
    }
    std::cout << report_to_json(report) << "\n";
    return 0;
}

int run_scan_isotropic(int d, const std::string& theorem_name, double p_start, double p_stop,
                       double p_step, const std::string& strategy_name, std::string out) {
    const TheoremId theorem = theorem_from_string(theorem_name);
    if (theorem == TheoremId::MUB) throw config_error("scan isotropic: theorem must be T1..T5");
    const ScanResult res =
        scan_isotropic(d, theorem, p_start, p_stop, p_step, strategy_from_string(strategy_name));
    if (out.empty())
        out = "scan_isotropic_d" + std::to_string(d) + "_" + theorem_name + ".csv";
    mumsep::detail::write_file(out, scan_to_csv(res));
    std::cout << "d=" << d << " theorem=" << theorem_name << " points=" << res.rows.size()
              << " out=" << out << "\n";
    if (res.first_detected)
        std::cout << "first_detected_p=" << fmt_g12(*res.first_detected) << "\n";
    else
        std::cout << "first_detected_p=none\n";
    return 0;
}

int run_sweep_separable(const std::vector<int>& dims, int count, std::uint64_t seed,
                        const std::string& theorem_name, const std::string& strategy_name,
                        int terms) {
    const TheoremId theorem = theorem_from_string(theorem_name);
    if (theorem == TheoremId::MUB) throw config_error("sweep separable: theorem must be T1..T5");
    const SweepResult res =
        sweep_separable(dims, count, seed, theorem, strategy_from_string(strategy_name), terms);
    std::cout << "count=" << res.count << " max_margin=" << fmt_g17(res.max_margin)
              << " detections=" << res.detections << "\n";
    if (res.max_margin > kDetectTol) {
        std::cout << "result=soundness-regression\n";
        return 5;
    }
    std::cout << "result=ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutually unbiased measurements and separability criteria"};
    app.require_subcommand(1);

    std::function<int()> action;

    // mums build | mums verify
    CLI::App* mums = app.add_subcommand("mums", "build or verify measurement sets");
    mums->require_subcommand(1);
    {
        auto* build = mums->add_subcommand("build", "construct the complete set of d+1 MUMs");
        auto d = std::make_shared<int>(0);
        auto t = std::make_shared<double>(0.0);
        auto out = std::make_shared<std::string>();
        build->add_option("--d", *d, "dimension (>= 2)")->required();
        CLI::Option* t_opt =
            build->add_option("--t", *t, "construction parameter in (0, max_t(d)]; default max_t(d)");
        build->add_option("--out", *out, "output JSON path (default mums_d<d>.json)");
        build->callback([=, &action]() {
            action = [=]() {
                return run_mums_build(*d, t_opt->count() ? std::optional<double>(*t) : std::nullopt,
                                      *out);
            };
        });
    }
    {
        auto* verify = mums->add_subcommand("verify", "verify a measurement-set file");
        auto in = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(kVerifyTol);
        verify->add_option("--in", *in, "measurement-set JSON path")->required();
        verify->add_option("--tol", *tol, "verification tolerance (default 1e-9)");
        verify->callback([=, &action]() { action = [=]() { return run_mums_verify(*in, *tol); }; });
    }

    // state gen
    CLI::App* state = app.add_subcommand("state", "generate density matrices");
    state->require_subcommand(1);
    {
        auto* gen = state->add_subcommand("gen", "write a density-matrix JSON file");
        auto kind = std::make_shared<std::string>();
        auto dims = std::make_shared<std::vector<int>>();
        auto d = std::make_shared<int>(0);
        auto m = std::make_shared<int>(0);
        auto p = std::make_shared<double>(0.0);
        auto terms = std::make_shared<int>(4);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        gen->add_option("--kind", *kind,
                        "mixed|isotropic|ghz|noisy-ghz|random|product|separable")
            ->required();
        gen->add_option("--dims", *dims, "subsystem dimensions, e.g. 2,3")->delimiter(',');
        gen->add_option("--d", *d, "single-party dimension (isotropic, ghz)");
        gen->add_option("--m", *m, "party count (ghz)");
        gen->add_option("--p", *p, "mixing parameter (isotropic, noisy-ghz)");
        gen->add_option("--terms", *terms, "mixture terms (separable; default 4)");
        gen->add_option("--seed", *seed, "random seed (default 1)");
        gen->add_option("--out", *out, "output path (default state_<kind>.json)");
        gen->callback([=, &action]() {
            action = [=]() { return run_state_gen(*kind, *dims, *d, *m, *p, *terms, *seed, *out); };
        });
    }

    // crit eval
    CLI::App* crit = app.add_subcommand("crit", "evaluate separability criteria");
    crit->require_subcommand(1);
    {
        auto* eval = crit->add_subcommand("eval", "evaluate a criterion on a state file");
        auto theorem = std::make_shared<std::string>();
        auto state_path = std::make_shared<std::string>();
        auto set_paths = std::make_shared<std::vector<std::string>>();
        auto strategy = std::make_shared<std::string>("exact");
        eval->add_option("--theorem", *theorem, "T1|T2|T3|T4|T5|MUB")->required();
        eval->add_option("--state", *state_path, "density-matrix JSON path")->required();
        eval->add_option("--sets", *set_paths,
                         "measurement-set JSON paths, one per party (default: built in-process, "
                         "bipartite uses P and its transpose)");
        eval->add_option("--strategy", *strategy, "exact|greedy|diagonal (default exact)");
        eval->callback([=, &action]() {
            action = [=]() { return run_crit_eval(*theorem, *state_path, *set_paths, *strategy); };
        });
    }

    // scan isotropic
    CLI::App* scan = app.add_subcommand("scan", "threshold scans");
    scan->require_subcommand(1);
    {
        auto* iso = scan->add_subcommand("isotropic", "scan the isotropic family in p");
        auto d = std::make_shared<int>(0);
        auto theorem = std::make_shared<std::string>();
        auto p_start = std::make_shared<double>(0.0);
        auto p_stop = std::make_shared<double>(1.0);
        auto p_step = std::make_shared<double>(1e-3);
        auto strategy = std::make_shared<std::string>("exact");
        auto out = std::make_shared<std::string>();
        iso->add_option("--d", *d, "dimension (>= 2)")->required();
        iso->add_option("--theorem", *theorem, "T1|T2|T3|T4|T5")->required();
        iso->add_option("--p-start", *p_start, "grid start (default 0)");
        iso->add_option("--p-stop", *p_stop, "grid stop (default 1)");
        iso->add_option("--p-step", *p_step, "grid step (default 1e-3)");
        iso->add_option("--strategy", *strategy, "exact|greedy|diagonal (default exact)");
        iso->add_option("--out", *out, "CSV path (default scan_isotropic_d<d>_<theorem>.csv)");
        iso->callback([=, &action]() {
            action = [=]() {
                return run_scan_isotropic(*d, *theorem, *p_start, *p_stop, *p_step, *strategy,
                                          *out);
            };
        });
    }

    // sweep separable
    CLI::App* sweep = app.add_subcommand("sweep", "soundness sweeps");
    sweep->require_subcommand(1);
    {
        auto* sep = sweep->add_subcommand("separable",
                                          "evaluate seeded random separable states; any "
                                          "detection is a soundness regression");
        auto dims = std::make_shared<std::vector<int>>();
        auto count = std::make_shared<int>(200);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto theorem = std::make_shared<std::string>();
        auto strategy = std::make_shared<std::string>("exact");
        auto terms = std::make_shared<int>(4);
        sep->add_option("--dims", *dims, "subsystem dimensions, e.g. 3,3")
            ->delimiter(',')
            ->required();
        sep->add_option("--count", *count, "number of states (default 200)");
        sep->add_option("--seed", *seed, "random seed (default 1)");
        sep->add_option("--theorem", *theorem, "T1|T2|T3|T4|T5")->required();
        sep->add_option("--strategy", *strategy, "exact|greedy|diagonal (default exact)");
        sep->add_option("--terms", *terms, "mixture terms per state (default 4)");
        sep->callback([=, &action]() {
            action = [=]() {
                return run_sweep_separable(*dims, *count, *seed, *theorem, *strategy, *terms);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!action) {
        std::cerr << "error: no command selected\n";
        return 2;
    }
    try {
        return action();
    } catch (const positivity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
