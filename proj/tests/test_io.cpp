#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pillowcase/report_io.hpp"

using namespace pillowcase;
namespace fs = std::filesystem;

namespace {

IntersectionReport tiny_report() {
    IntersectionProblem prob;
    prob.word = parse_word("Ta");
    prob.perturbation = {0.1, PerturbationShape::Sine};
    prob.family = KnownFamily::UnknotLens;
    prob.p = 1;
    return solve(prob);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

#ifdef PILLOWCASE_CLI_PATH
int run_cli(const std::string& args) {
    const std::string cmd = std::string(PILLOWCASE_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("csv has the documented column layout", "[io]") {
    const IntersectionReport report = tiny_report();
    const std::string csv = io::points_csv(report);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "chart,alpha,beta,gamma,ahat_x,ahat_y,ahat_z,bhat_x,bhat_y,bhat_z,"
          "chi,psi,phi,theta,residual,transverse");
    // one line per point plus the header
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(report.points.size()) + 1);
}

TEST_CASE("json report carries schema, flags and provenance", "[io]") {
    const IntersectionReport report = tiny_report();
    const auto j = io::report_json(report, "unknot-lens");
    CHECK(j["schema"] == 1);
    CHECK(j["word"] == "Ta");
    CHECK(j["family"] == "unknot-lens");
    CHECK(j["epsilon"] == 0.1);
    CHECK(j["count"] == report.count);
    CHECK(j["flags"]["double_point_hit"] == false);
    REQUIRE(j["points"].is_array());
    CHECK(j["points"].size() == static_cast<std::size_t>(report.count));
    for (const auto& p : j["points"]) {
        CHECK(p.contains("chart"));
        CHECK(p["ahat"].size() == 3);
        CHECK(p.contains("residual"));
    }
}

TEST_CASE("chart hats for P3 points use the normal form", "[io]") {
    const auto [ahat, bhat] = io::chart_hats(ChartPoint::p3(1.0, 0.0, 0.25));
    CHECK(ahat.x == Catch::Approx(std::cos(0.25)));
    CHECK(ahat.z == Catch::Approx(std::sin(0.25)));
    CHECK((ahat + bhat).norm() < 1e-15);
}

TEST_CASE("svg figures are well-formed and honor the stamp", "[io]") {
    const IntersectionReport report = tiny_report();
    IntersectionProblem prob;
    prob.word = parse_word("Ta");

    const std::string svg =
        io::pillowcase_svg(report, prob.word, {0.1, PerturbationShape::Sine}, "");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("<!--") == std::string::npos);

    const std::string stamped =
        io::torus_svg(report, prob.word, {0.1, PerturbationShape::Sine}, "generated test");
    CHECK(stamped.find("<!-- generated test -->") != std::string::npos);
}

TEST_CASE("lagrangian curve csv", "[io]") {
    const std::string csv = io::lagrangians_csv({0.1, PerturbationShape::Sine}, 10);
    CHECK(csv.rfind("curve,param,alpha,beta\n", 0) == 0);
    CHECK(csv.find("Ls_theta0") != std::string::npos);
    CHECK(csv.find("Ls_thetapi") != std::string::npos);
    // the disk segment sits on beta = 0
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (line.rfind("Ld,", 0) == 0) CHECK(line.substr(line.rfind(',') + 1) == "0");
}

#ifdef PILLOWCASE_CLI_PATH

TEST_CASE("cli end to end: determinism and exit codes", "[io][cli]") {
    const fs::path tmp = fs::temp_directory_path() / "pillowcase_cli_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    const std::string base = "count --family trefoil --reproducible --out ";
    REQUIRE(run_cli(base + (tmp / "a").string()) == 0);
    REQUIRE(run_cli(base + (tmp / "b").string()) == 0);
    CHECK(slurp(tmp / "a" / "report.json") == slurp(tmp / "b" / "report.json"));
    CHECK(slurp(tmp / "a" / "points.csv") == slurp(tmp / "b" / "points.csv"));
    CHECK(slurp(tmp / "a" / "pillowcase.svg") == slurp(tmp / "b" / "pillowcase.svg"));
    CHECK(slurp(tmp / "a" / "torus.svg") == slurp(tmp / "b" / "torus.svg"));

    const auto j = nlohmann::json::parse(slurp(tmp / "a" / "report.json"));
    CHECK(j["count"] == 3);

    CHECK(run_cli("count --family unknot-lens --p 4 --out " + (tmp / "dp").string()) == 2);
    CHECK(run_cli("count --word \"Tq\" --out " + (tmp / "err").string()) == 1);
    CHECK(run_cli("count --word \"Ta\" --epsilon 0.7 --out " + (tmp / "err2").string()) ==
          1);
    CHECK(run_cli("verify mcg --samples 5") == 0);
    CHECK(run_cli("plot --reproducible --out " + (tmp / "plot").string()) == 0);
    CHECK(fs::exists(tmp / "plot" / "lagrangians.csv"));
    CHECK(fs::exists(tmp / "plot" / "lagrangians.svg"));

    fs::remove_all(tmp);
}

#endif
