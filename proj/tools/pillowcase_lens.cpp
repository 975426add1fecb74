#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "pillowcase/intersect.hpp"
#include "pillowcase/presentations.hpp"
#include "pillowcase/report_io.hpp"

namespace fs = std::filesystem;
using namespace pillowcase;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return std::string("generated ") + buf;
}

struct CountOptions {
    std::string word_text;
    std::string family;
    int p = 0;
    double epsilon = 0.1;
    int grid = 0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string formats = "csv,svg,json";
    bool reproducible = false;
};

int run_count(const CountOptions& opt) {
    IntersectionProblem prob;
    prob.perturbation = {opt.epsilon, PerturbationShape::Sine};
    prob.grid = opt.grid;
    prob.seed = opt.seed;
    prob.p = opt.p;

    std::string family_name = "generic";
    if (!opt.family.empty()) {
        family_name = opt.family;
        if (opt.family == "trefoil") {
            prob.family = KnownFamily::Trefoil;
            prob.word = parse_word("s b1 a1^-1");
        } else if (opt.family == "unknot-lens") {
            prob.family = KnownFamily::UnknotLens;
            prob.word = parse_word("Ta^" + std::to_string(opt.p));
        } else if (opt.family == "simple-lens") {
            prob.family = KnownFamily::SimpleLens;
            prob.word = opt.p == 0 ? parse_word("a1^-1")
                                   : parse_word("a1^-1 Ta^" + std::to_string(opt.p));
        } else {
            std::cerr << "error: unknown family '" << opt.family
                      << "' (expected trefoil, unknot-lens, simple-lens)\n";
            return 1;
        }
    } else if (!opt.word_text.empty()) {
        prob.word = parse_word(opt.word_text);
    } else {
        std::cerr << "error: count needs --word or --family\n";
        return 1;
    }
    if (!(opt.epsilon > 0.0 && opt.epsilon < 0.5)) {
        std::cerr << "error: epsilon must lie in (0, 0.5)\n";
        return 1;
    }

    const IntersectionReport report = solve(prob);

    std::set<std::string> formats;
    std::stringstream ss(opt.formats);
    for (std::string item; std::getline(ss, item, ',');) formats.insert(item);

    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    const std::string stamp = opt.reproducible ? "" : timestamp_now();

    if (formats.count("json"))
        write_file(out_dir / "report.json",
                   io::report_json(report, family_name).dump(2) + "\n");
    if (formats.count("csv")) write_file(out_dir / "points.csv", io::points_csv(report));
    if (formats.count("svg")) {
        write_file(out_dir / "pillowcase.svg",
                   io::pillowcase_svg(report, prob.word, prob.perturbation, stamp));
        write_file(out_dir / "torus.svg",
                   io::torus_svg(report, prob.word, prob.perturbation, stamp));
    }

    std::cout << "word: " << report.word_text << "\n"
              << "count: " << report.count << "\n";
    for (const auto& pt : report.points) {
        std::cout << "  point chi=" << io::fmt(pt.disk.chi) << " psi=" << io::fmt(pt.disk.psi)
                  << " phi=" << io::fmt(pt.sphere.phi)
                  << " theta=" << io::fmt(pt.sphere.theta)
                  << " residual=" << io::fmt(pt.residual)
                  << " transverse=" << to_string(pt.transverse)
                  << (pt.near_double_point ? " [double point]" : "") << "\n";
    }
    if (report.double_point_hit)
        std::cout << "flag: DoublePointHit (generator counting fails here)\n";
    if (report.non_transverse_point) std::cout << "flag: NonTransversePoint\n";
    if (report.dropped_seeds > 0)
        std::cout << "warning: " << report.dropped_seeds << " seeds did not converge\n";

    return (report.double_point_hit || report.non_transverse_point) ? 2 : 0;
}

int run_verify_mcg(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    bool ok = true;
    for (const auto& report : {verify_relations(samples, rng), birman_checks(samples, rng)}) {
        for (const auto& check : report.checks) {
            const bool pass = check.max_residual < 1e-9;
            ok = ok && pass;
            std::cout << (pass ? "  ok   " : "  FAIL ") << check.name
                      << "  residual=" << io::fmt(check.max_residual) << "\n";
        }
    }
    return ok ? 0 : 3;
}

int run_verify_traces(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uphi(0.0, kPi);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);

    double max_diff = 0.0;
    for (const double eps : {0.05, 0.1, 0.2}) {
        const PerturbationConfig p{eps, PerturbationShape::Sine};
        for (int i = 0; i < 10000; ++i) {
            const SphereCoord c{uphi(rng), utheta(rng)};
            const RepTuple rho = sphere_rep(c, p);
            const TraceProfile tp = trace_profile(rho);
            const SphereTraces t = sphere_traces(c, p);
            const double entries[6] = {t.tr_A, t.tr_B, t.tr_Aa, t.tr_Ba, t.tr_Ab, t.tr_AB};
            const int idx[6] = {0, 1, 2, 3, 4, 6};
            for (int k = 0; k < 6; ++k)
                max_diff = std::max(max_diff, std::abs(tp[idx[k]] - entries[k]));
            max_diff = std::max(max_diff, std::abs(mu(rho) - t.mu));
        }
    }
    const bool traces_ok = max_diff < 1e-10;
    std::cout << "  closed-form vs matrix traces: max diff " << io::fmt(max_diff)
              << (traces_ok ? "  ok" : "  FAIL") << "\n";

    // analytic jacobians against central differences away from the poles
    const PerturbationConfig p{0.1, PerturbationShape::Sine};
    std::uniform_real_distribution<double> uphi_in(0.05, kPi - 0.05);
    double max_rel = 0.0;
    constexpr double h = 1e-6;
    const TraceFn fns[] = {TraceFn::TrA,  TraceFn::TrB,  TraceFn::TrAa, TraceFn::TrBa,
                           TraceFn::TrAb, TraceFn::TrAB, TraceFn::Mu};
    const auto eval = [&](const SphereCoord& c, TraceFn fn) {
        const SphereTraces t = sphere_traces(c, p);
        switch (fn) {
            case TraceFn::TrA: return t.tr_A;
            case TraceFn::TrB: return t.tr_B;
            case TraceFn::TrAa: return t.tr_Aa;
            case TraceFn::TrBa: return t.tr_Ba;
            case TraceFn::TrAb: return t.tr_Ab;
            case TraceFn::TrAB: return t.tr_AB;
            case TraceFn::Mu: return t.mu;
        }
        return 0.0;
    };
    for (int i = 0; i < 1000; ++i) {
        const SphereCoord c{uphi_in(rng), utheta(rng)};
        for (const TraceFn fn : fns) {
            const Partials got = sphere_chart_jacobian(c, p, fn);
            const double dphi =
                (eval({c.phi + h, c.theta}, fn) - eval({c.phi - h, c.theta}, fn)) / (2.0 * h);
            const double dtheta =
                (eval({c.phi, c.theta + h}, fn) - eval({c.phi, c.theta - h}, fn)) / (2.0 * h);
            max_rel = std::max(max_rel,
                               std::abs(got.d_phi - dphi) / std::max(1.0, std::abs(dphi)));
            max_rel = std::max(
                max_rel, std::abs(got.d_theta - dtheta) / std::max(1.0, std::abs(dtheta)));
        }
    }
    const bool jac_ok = max_rel < 1e-6;
    std::cout << "  jacobians vs finite differences: max rel " << io::fmt(max_rel)
              << (jac_ok ? "  ok" : "  FAIL") << "\n";

    // both poles land exactly on the double point
    const ChartPoint north = sphere_chart({0.0, 0.0}, p);
    const ChartPoint south = sphere_chart({kPi, 0.0}, p);
    const bool poles_ok = north.alpha == kHalfPi && north.beta == 0.0 &&
                          north.gamma == 0.0 && south.alpha == kHalfPi &&
                          south.beta == 0.0 && south.gamma == 0.0;
    std::cout << "  double-point identity at the poles: " << (poles_ok ? "ok" : "FAIL")
              << "\n";

    return (traces_ok && jac_ok && poles_ok) ? 0 : 3;
}

int run_verify_cohomology(std::uint64_t seed) {
    namespace coh = pillowcase::cohomology;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uphi(0.0, kPi);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
    std::uniform_real_distribution<double> uchi(0.1, kPi - 0.1);
    std::uniform_real_distribution<double> upsi(-kHalfPi + 0.1, kHalfPi - 0.1);

    bool ok = true;
    const auto expect = [&](const char* what, int got, int want) {
        const bool pass = got == want;
        ok = ok && pass;
        if (!pass)
            std::cout << "  FAIL " << what << ": got " << got << ", want " << want << "\n";
    };

    const coh::ConstrainedPresentation disk = coh::pres_disk();
    const coh::ConstrainedPresentation rt22 = coh::pres_rt22();
    const coh::ConstrainedPresentation rnatpi = coh::pres_rnatpi();

    for (int i = 0; i < 200; ++i)
        expect("disk H1", coh::h1_dim(disk, coh::disk_assignment({uchi(rng), upsi(rng)})), 2);
    for (int i = 0; i < 200; ++i) {
        const SphereCoord c{uphi(rng), utheta(rng)};
        expect("L_s H1", coh::h1_dim(rt22, coh::rt22_family(c)(0.1), 0.1), 4);
        expect("R_nat_pi bound", coh::epsilon_bound(rnatpi, coh::rnatpi_family(c)), 5);
        expect("R(T2,2) bound", coh::epsilon_bound(rt22, coh::rt22_family(c)), 7);
    }
    std::cout << "  H1 dims: 2, 4; bounds: 5, 7" << (ok ? "  ok" : "  FAIL") << "\n";

    const coh::Assignment z_rho = coh::z_example_family()(0.0);
    const int z1_1 = coh::z1_dim(coh::pres_z_example(1), z_rho, 0.1);
    const int z1_2 = coh::z1_dim(coh::pres_z_example(2), z_rho, 0.1);
    const int z1_3 = coh::z1_dim(coh::pres_z_example(3), z_rho, 0.1);
    const int b1 = coh::epsilon_bound(coh::pres_z_example(1), coh::z_example_family());
    const int b2 = coh::epsilon_bound(coh::pres_z_example(2), coh::z_example_family());
    const int b3 = coh::epsilon_bound(coh::pres_z_example(3), coh::z_example_family());
    expect("Z example Z1 (F1)", z1_1, 2);
    expect("Z example Z1 (F2)", z1_2, 3);
    expect("Z example Z1 (F3)", z1_3, 2);
    expect("Z example bound (F1)", b1, 2);
    expect("Z example bound (F2)", b2, 3);
    expect("Z example bound (F3)", b3, 3);
    std::cout << "  Z worked example: Z1 = (" << z1_1 << ", " << z1_2 << ", " << z1_3
              << "), bounds = (" << b1 << ", " << b2 << ", " << b3 << ")\n";

    return ok ? 0 : 3;
}

struct PlotOptions {
    double epsilon = 0.1;
    std::string out_dir = ".";
    bool reproducible = false;
};

int run_plot(const PlotOptions& opt) {
    if (!(opt.epsilon >= 0.0 && opt.epsilon < 0.5)) {
        std::cerr << "error: epsilon must lie in [0, 0.5)\n";
        return 1;
    }
    const PerturbationConfig pert{opt.epsilon, PerturbationShape::Sine};
    if (opt.epsilon < 1e-12)
        std::cerr << "warning: eps = 0 is degenerate; the arcs collapse onto beta = 0\n";
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    const std::string stamp = opt.reproducible ? "" : timestamp_now();
    write_file(out_dir / "lagrangians.csv", io::lagrangians_csv(pert));
    write_file(out_dir / "lagrangians.svg", io::lagrangians_svg(pert, stamp));
    std::cout << "wrote lagrangians.csv and lagrangians.svg\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Lagrangian intersections in the traceless SU(2) character variety of "
        "the twice-punctured torus"};
    app.require_subcommand(1);

    CountOptions copt;
    CLI::App* count = app.add_subcommand(
        "count", "count intersection points of L_s with L_d . f");
    count->add_option("--word", copt.word_text, "mapping class word, e.g. \"s b1 a1^-1\"");
    count->add_option("--family", copt.family, "trefoil | unknot-lens | simple-lens");
    count->add_option("--p", copt.p, "family parameter p");
    count->add_option("--epsilon", copt.epsilon, "perturbation size in (0, 0.5)");
    count->add_option("--grid", copt.grid, "grid resolution per coordinate (>= 64)");
    count->add_option("--seed", copt.seed, "seed recorded in provenance");
    count->add_option("--out", copt.out_dir, "output directory");
    count->add_option("--format", copt.formats, "comma list of csv,svg,json");
    count->add_flag("--reproducible", copt.reproducible, "suppress timestamps");

    std::string suite;
    int samples = 100;
    std::uint64_t vseed = 7;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "mcg | traces | cohomology | all")->required();
    verify->add_option("--samples", samples, "random tuples per relation");
    verify->add_option("--seed", vseed, "random seed");

    PlotOptions popt;
    CLI::App* plot = app.add_subcommand("plot", "plot the Lagrangians in the pillowcase");
    plot->add_option("--epsilon", popt.epsilon, "perturbation size in [0, 0.5)");
    plot->add_option("--out", popt.out_dir, "output directory");
    plot->add_flag("--reproducible", popt.reproducible, "suppress timestamps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (count->parsed()) return run_count(copt);
        if (plot->parsed()) return run_plot(popt);
        if (verify->parsed()) {
            if (suite != "mcg" && suite != "traces" && suite != "cohomology" &&
                suite != "all") {
                std::cerr << "error: unknown suite '" << suite << "'\n";
                return 1;
            }
            int rc = 0;
            if (suite == "mcg" || suite == "all") {
                std::cout << "mcg relation suite:\n";
                rc = std::max(rc, run_verify_mcg(samples, vseed));
            }
            if (suite == "traces" || suite == "all") {
                std::cout << "trace formula suite:\n";
                rc = std::max(rc, run_verify_traces(vseed));
            }
            if (suite == "cohomology" || suite == "all") {
                std::cout << "cohomology suite:\n";
                rc = std::max(rc, run_verify_cohomology(vseed));
            }
            std::cout << (rc == 0 ? "all suites passed\n" : "suite failures detected\n");
            return rc;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
