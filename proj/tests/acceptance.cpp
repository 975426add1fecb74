// Acceptance suite: runs each advertised guarantee end to end and prints
// one pass/fail line per criterion.  Usage: acceptance [path-to-cli]

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pillowcase/intersect.hpp"
#include "pillowcase/presentations.hpp"

namespace fs = std::filesystem;
using namespace pillowcase;
using nlohmann::json;

namespace {

std::string g_cli;
int g_passed = 0;
int g_failed = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %d [%s] %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    (pass ? g_passed : g_failed) += 1;
}

struct CliRun {
    int exit_code = -1;
    json report;
};

CliRun run_cli(const std::string& args, const std::string& tag) {
    const fs::path out = fs::temp_directory_path() / ("pillowcase_acceptance_" + tag);
    fs::remove_all(out);
    CliRun run;
    const std::string cmd = g_cli + " " + args + " --reproducible --out " + out.string() +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    run.exit_code = WEXITSTATUS(status);
    const fs::path report_path = out / "report.json";
    if (fs::exists(report_path)) {
        std::ifstream in(report_path);
        in >> run.report;
    }
    fs::remove_all(out);
    return run;
}

bool all_transverse(const json& report) {
    for (const auto& p : report["points"])
        if (p["transverse"] != "yes" || p["near_double_point"] == true) return false;
    return true;
}

// 1. Trefoil: exactly 3 transverse points away from the double point,
//    through the generic word pipeline, in under 30 seconds.
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const CliRun run = run_cli("count --word \"s b1 a1^-1\" --epsilon 0.1", "trefoil");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = run.exit_code == 0 && run.report.value("count", -1) == 3 &&
                      all_transverse(run.report) && secs < 30.0;
    std::ostringstream what;
    what << "trefoil count --word \"s b1 a1^-1\": count=" << run.report.value("count", -1)
         << ", exit=" << run.exit_code << ", " << secs << " s";
    report(1, pass, what.str());
}

// 2. Unknot in L(p,1): p transverse points for p mod 4 != 0, DoublePointHit
//    otherwise.
void criterion_2() {
    bool pass = true;
    std::ostringstream what;
    what << "unknot-lens counts:";
    for (const int p : {1, 2, 3, 5, 6, 7}) {
        const CliRun run =
            run_cli("count --family unknot-lens --p " + std::to_string(p), "unknot");
        const int count = run.report.value("count", -1);
        pass = pass && run.exit_code == 0 && count == p && all_transverse(run.report);
        what << " p" << p << "=" << count;
    }
    for (const int p : {4, 8}) {
        const CliRun run =
            run_cli("count --family unknot-lens --p " + std::to_string(p), "unknot");
        const bool hit = run.report["flags"].value("double_point_hit", false);
        pass = pass && run.exit_code == 2 && hit;
        what << " p" << p << "=" << (hit ? "double-point" : "missed-double-point");
    }
    report(2, pass, what.str());
}

// 3. Simple knot in L(p,1): p points matching the analytic sites within
//    1e-6; zero points for p = 0.
void criterion_3() {
    bool pass = true;
    std::ostringstream what;
    what << "simple-lens sites:";
    for (int p = 1; p <= 6; ++p) {
        const CliRun run =
            run_cli("count --family simple-lens --p " + std::to_string(p), "simple");
        const int count = run.report.value("count", -1);
        bool sites_ok = run.exit_code == 0 && count == p && all_transverse(run.report);
        auto sites = simple_knot_predicted_sites(p, 0.1);
        std::vector<bool> used(sites.size(), false);
        if (sites_ok) {
            for (const auto& pt : run.report["points"]) {
                bool matched = false;
                for (std::size_t i = 0; i < sites.size(); ++i) {
                    if (used[i]) continue;
                    if (std::abs(sites[i].disk.chi - pt["chi"].get<double>()) < 1e-6 &&
                        std::abs(sites[i].disk.psi - pt["psi"].get<double>()) < 1e-6 &&
                        std::abs(kHalfPi - pt["phi"].get<double>()) < 1e-6) {
                        used[i] = true;
                        matched = true;
                        break;
                    }
                }
                sites_ok = sites_ok && matched;
            }
        }
        pass = pass && sites_ok;
        what << " p" << p << "=" << count << (sites_ok ? "" : "(site-mismatch)");
    }
    const CliRun zero = run_cli("count --family simple-lens --p 0", "simple0");
    pass = pass && zero.exit_code == 0 && zero.report.value("count", -1) == 0;
    what << " p0=" << zero.report.value("count", -1);
    report(3, pass, what.str());
}

// 4. Cohomology dimensions: H1 = 2 at 200 disk points, bounds 5 and 7 and
//    H1 = 4 at 200 points over L_s.  Exact integer match.
void criterion_4() {
    namespace coh = pillowcase::cohomology;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uphi(0.0, kPi);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
    std::uniform_real_distribution<double> uchi(0.05, kPi - 0.05);
    std::uniform_real_distribution<double> upsi(-kHalfPi + 0.05, kHalfPi - 0.05);

    const auto disk = coh::pres_disk();
    const auto rt22 = coh::pres_rt22();
    const auto rnatpi = coh::pres_rnatpi();

    bool pass = true;
    for (int i = 0; i < 200 && pass; ++i)
        pass = coh::h1_dim(disk, coh::disk_assignment({uchi(rng), upsi(rng)})) == 2;
    bool pass_h4 = true, pass_b5 = true, pass_b7 = true;
    for (int i = 0; i < 200; ++i) {
        const SphereCoord c{uphi(rng), utheta(rng)};
        pass_h4 = pass_h4 && coh::h1_dim(rt22, coh::rt22_family(c)(0.1), 0.1) == 4;
        pass_b5 = pass_b5 && coh::epsilon_bound(rnatpi, coh::rnatpi_family(c)) == 5;
        pass_b7 = pass_b7 && coh::epsilon_bound(rt22, coh::rt22_family(c)) == 7;
    }
    std::ostringstream what;
    what << "cohomology at 200 points: disk H1=2 " << (pass ? "ok" : "FAIL")
         << ", L_s H1=4 " << (pass_h4 ? "ok" : "FAIL") << ", bounds 5/7 "
         << ((pass_b5 && pass_b7) ? "ok" : "FAIL");
    report(4, pass && pass_h4 && pass_b5 && pass_b7, what.str());
}

// 5. The Gamma = Z worked example reproduces (2,3,2) and (2,3,3) exactly.
void criterion_5() {
    namespace coh = pillowcase::cohomology;
    const coh::Assignment rho = coh::z_example_family()(0.0);
    const int z1[3] = {coh::z1_dim(coh::pres_z_example(1), rho, 0.1),
                       coh::z1_dim(coh::pres_z_example(2), rho, 0.1),
                       coh::z1_dim(coh::pres_z_example(3), rho, 0.1)};
    const int b[3] = {coh::epsilon_bound(coh::pres_z_example(1), coh::z_example_family()),
                      coh::epsilon_bound(coh::pres_z_example(2), coh::z_example_family()),
                      coh::epsilon_bound(coh::pres_z_example(3), coh::z_example_family())};
    const bool pass =
        z1[0] == 2 && z1[1] == 3 && z1[2] == 2 && b[0] == 2 && b[1] == 3 && b[2] == 3;
    std::ostringstream what;
    what << "Z example: Z1=(" << z1[0] << "," << z1[1] << "," << z1[2] << ") bounds=("
         << b[0] << "," << b[1] << "," << b[2] << ")";
    report(5, pass, what.str());
}

// 6. Every mapping-class and braid relation holds as an action on 100
//    random tuples with residual < 1e-9.
void criterion_6() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (const auto& rep : {verify_relations(100, rng), birman_checks(100, rng)})
        worst = std::max(worst, rep.max_residual());
    std::ostringstream what;
    what << "mcg relations: max residual " << worst;
    report(6, worst < 1e-9, what.str());
}

// 7. Closed-form sphere traces agree with the matrix path within 1e-10 at
//    10^4 random points for eps in {0.05, 0.1, 0.2}.
void criterion_7() {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> uphi(0.0, kPi);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
    double worst = 0.0;
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
                worst = std::max(worst, std::abs(tp[idx[k]] - entries[k]));
            worst = std::max(worst, std::abs(mu(rho) - t.mu));
        }
    }
    std::ostringstream what;
    what << "trace consistency: max diff " << worst << " over 3x10^4 points";
    report(7, worst < 1e-10, what.str());
}

// 8. Both poles land exactly on the chart point (pi/2, 0, 0) and the
//    parameterization is injective elsewhere (spot checks).
void criterion_8() {
    const PerturbationConfig p{0.1, PerturbationShape::Sine};
    bool pass = true;
    for (const double theta : {0.0, 0.9, kPi, 5.0}) {
        for (const double phi : {0.0, kPi}) {
            const ChartPoint pt = sphere_chart({phi, theta}, p);
            pass = pass && pt.chart == Chart::P3 && pt.alpha == kHalfPi &&
                   pt.beta == 0.0 && pt.gamma == 0.0;
        }
    }
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> uphi(0.02, kPi - 0.02);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
    int checked = 0;
    while (checked < 1000) {
        const SphereCoord c1{uphi(rng), utheta(rng)};
        const SphereCoord c2{uphi(rng), utheta(rng)};
        if (std::abs(c1.phi - c2.phi) < 1e-3 &&
            std::abs(std::remainder(c1.theta - c2.theta, kTwoPi)) < 1e-3)
            continue;
        ++checked;
        pass = pass && rep_distance(sphere_rep(c1, p), sphere_rep(c2, p)) > 1e-9;
    }
    report(8, pass, "double-point identity at the poles and injectivity spot checks");
}

// 9. Analytic jacobians agree with central finite differences within 1e-6
//    relative at 10^3 points away from the poles.
void criterion_9() {
    std::mt19937_64 rng(105);
    const PerturbationConfig p{0.1, PerturbationShape::Sine};
    std::uniform_real_distribution<double> uphi(0.05, kPi - 0.05);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
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
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SphereCoord c{uphi(rng), utheta(rng)};
        for (const TraceFn fn : fns) {
            const Partials got = sphere_chart_jacobian(c, p, fn);
            const double dphi =
                (eval({c.phi + h, c.theta}, fn) - eval({c.phi - h, c.theta}, fn)) /
                (2.0 * h);
            const double dtheta =
                (eval({c.phi, c.theta + h}, fn) - eval({c.phi, c.theta - h}, fn)) /
                (2.0 * h);
            worst = std::max(worst,
                             std::abs(got.d_phi - dphi) / std::max(1.0, std::abs(dphi)));
            worst = std::max(worst, std::abs(got.d_theta - dtheta) /
                                        std::max(1.0, std::abs(dtheta)));
        }
    }
    std::ostringstream what;
    what << "jacobian validation: max relative deviation " << worst;
    report(9, worst < 1e-6, what.str());
}

}  // namespace

int main(int argc, char** argv) {
    g_cli = argc > 1 ? argv[1] : "pillowcase-lens";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    std::printf("SUMMARY: %d/%d criteria passed\n", g_passed, g_passed + g_failed);
    return g_failed == 0 ? 0 : 1;
}
