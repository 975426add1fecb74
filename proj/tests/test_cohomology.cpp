#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pillowcase/cohomology.hpp"
#include "pillowcase/presentations.hpp"

using namespace pillowcase;
using namespace pillowcase::cohomology;

namespace {

template <class Rng>
SphereCoord random_sphere_coord(Rng& rng) {
    std::uniform_real_distribution<double> uphi(0.0, kPi);
    std::uniform_real_distribution<double> utheta(0.0, kTwoPi);
    return {uphi(rng), utheta(rng)};
}

template <class Rng>
DiskCoord random_interior_disk(Rng& rng) {
    std::uniform_real_distribution<double> uc(0.1, kPi - 0.1);
    std::uniform_real_distribution<double> up(-kHalfPi + 0.1, kHalfPi - 0.1);
    return {uc(rng), up(rng)};
}

}  // namespace

TEST_CASE("word derivative matches finite differences", "[cohomology]") {
    std::mt19937_64 rng(51);
    const ConstrainedPresentation pres = pres_rnatpi();
    constexpr double h = 1e-5;
    std::uniform_real_distribution<double> ug(-1.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const Assignment rho = rnatpi_family(random_sphere_coord(rng))(0.1);
        std::vector<Vec3> eta(pres.n());
        Eigen::VectorXd eta_flat(3 * pres.n());
        for (int k = 0; k < pres.n(); ++k) {
            eta[k] = {ug(rng), ug(rng), ug(rng)};
            eta_flat(3 * k) = eta[k].x;
            eta_flat(3 * k + 1) = eta[k].y;
            eta_flat(3 * k + 2) = eta[k].z;
        }
        const auto deformed = [&](double t) {
            Assignment out(rho.size());
            for (std::size_t k = 0; k < rho.size(); ++k) {
                const double n = eta[k].norm();
                const Su2 e = n < 1e-300 ? Su2::identity()
                                         : exp_su2(eta[k] * (1.0 / n), t * n);
                out[k] = mul(e, rho[k]);
            }
            return out;
        };

        // relation rows: u(w) = d/dt [rho_t(w) rho(w)^{-1}]
        const Word& w = pres.relations[0].w;
        const Eigen::MatrixXd u = cohomology::detail::word_derivative(w, rho);
        const Eigen::Vector3d analytic = u * eta_flat;
        const Su2 base = evaluate(w, rho);
        const Su2 qp = mul(evaluate(w, deformed(h)), base.inverse());
        const Su2 qm = mul(evaluate(w, deformed(-h)), base.inverse());
        const Vec3 fd = (qp.vec() - qm.vec()) * (1.0 / (2.0 * h));
        CHECK(std::abs(analytic(0) - fd.x) < 1e-6 * std::max(1.0, std::abs(fd.x)));
        CHECK(std::abs(analytic(1) - fd.y) < 1e-6 * std::max(1.0, std::abs(fd.y)));
        CHECK(std::abs(analytic(2) - fd.z) < 1e-6 * std::max(1.0, std::abs(fd.z)));

        // constraint rows
        const double eps = 0.1;
        const Eigen::MatrixXd c = linearize(pres, rho, eps);
        for (int j = 0; j < pres.q(); ++j) {
            const double analytic_j = c.row(3 * pres.m() + j).dot(eta_flat);
            const double fd_j = (evaluate_constraint(pres.constraints[j], deformed(h), eps) -
                                 evaluate_constraint(pres.constraints[j], deformed(-h), eps)) /
                                (2.0 * h);
            CHECK(std::abs(analytic_j - fd_j) < 1e-6 * std::max(1.0, std::abs(fd_j)));
        }
    }
}

TEST_CASE("free presentation has full kernel", "[cohomology]") {
    ConstrainedPresentation pres;
    pres.generators = {"x", "y", "z"};
    std::mt19937_64 rng(52);
    const Assignment rho{random_su2(rng), random_su2(rng), random_su2(rng)};
    CHECK(z1_dim(pres, rho, 0.0) == 9);
}

TEST_CASE("coboundary dimensions", "[cohomology]") {
    // trivial representation: Ad = id, so no coboundaries
    CHECK(b1_dim({Su2::identity(), Su2::identity()}) == 0);

    // nonabelian pair: full 3-dimensional coboundary space
    CHECK(b1_dim({Su2::pure(kZAxis), Su2::pure(kXAxis)}) == 3);

    // abelian diagonal pair: the z-axis is fixed
    CHECK(b1_dim({exp_su2(kZAxis, 0.7), exp_su2(kZAxis, -1.1)}) == 2);
}

TEST_CASE("coboundaries are cocycles", "[cohomology]") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 20; ++i) {
        const Assignment rho = rnatpi_family(random_sphere_coord(rng))(0.1);
        const Eigen::MatrixXd c = linearize(pres_rnatpi(), rho, 0.1);
        const Eigen::MatrixXd b = coboundary_matrix(rho);
        CHECK((c * b).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(b1_dim(rho) == 3);
    }
}

TEST_CASE("disk variety: H^1 = 2 at nonabelian points", "[cohomology]") {
    std::mt19937_64 rng(54);
    const ConstrainedPresentation pres = pres_disk();
    for (int i = 0; i < 50; ++i) {
        const Assignment rho = disk_assignment(random_interior_disk(rng));
        CHECK(h1_dim(pres, rho) == 2);
    }
}

TEST_CASE("perturbed solid torus: H^1 = 2 everywhere", "[cohomology]") {
    std::mt19937_64 rng(61);
    const ConstrainedPresentation pres = pres_rnatpi();
    for (int i = 0; i < 50; ++i) {
        const SphereCoord c = random_sphere_coord(rng);
        const Assignment rho = rnatpi_family(c)(0.1);
        CHECK(h1_dim(pres, rho, 0.1) == 2);
    }
    CHECK(h1_dim(pres, rnatpi_family({0.0, 0.0})(0.1), 0.1) == 2);
    CHECK(h1_dim(pres, rnatpi_family({kPi, 1.0})(0.1), 0.1) == 2);
}

TEST_CASE("R(T^2,2): H^1 = 4 on the sphere Lagrangian", "[cohomology]") {
    std::mt19937_64 rng(55);
    const ConstrainedPresentation pres = pres_rt22();
    for (int i = 0; i < 50; ++i) {
        const SphereCoord c = random_sphere_coord(rng);
        const Assignment rho = rt22_family(c)(0.1);
        CHECK(h1_dim(pres, rho, 0.1) == 4);
    }
}

TEST_CASE("H^1 is conjugation invariant", "[cohomology]") {
    std::mt19937_64 rng(56);
    const ConstrainedPresentation pres = pres_rt22();
    for (int i = 0; i < 10; ++i) {
        Assignment rho = rt22_family(random_sphere_coord(rng))(0.1);
        const Su2 g = random_su2(rng);
        Assignment conj(rho.size());
        for (std::size_t k = 0; k < rho.size(); ++k) conj[k] = conjugate(g, rho[k]);
        CHECK(h1_dim(pres, rho, 0.1) == h1_dim(pres, conj, 0.1));
    }
}

TEST_CASE("trivial group has H^1 = 0", "[cohomology]") {
    ConstrainedPresentation pres;  // no generators
    CHECK(h1_dim(pres, {}, 0.0) == 0);
}

TEST_CASE("Z worked example: cocycle dimensions and bounds", "[cohomology]") {
    const BasepointFamily fam = z_example_family();
    const Assignment rho = fam(0.0);

    const int z1[] = {0, z1_dim(pres_z_example(1), rho, 0.1),
                      z1_dim(pres_z_example(2), rho, 0.1),
                      z1_dim(pres_z_example(3), rho, 0.1)};
    CHECK(z1[1] == 2);
    CHECK(z1[2] == 3);
    CHECK(z1[3] == 2);

    const int bound[] = {0, epsilon_bound(pres_z_example(1), fam),
                         epsilon_bound(pres_z_example(2), fam),
                         epsilon_bound(pres_z_example(3), fam)};
    CHECK(bound[1] == 2);
    CHECK(bound[2] == 3);
    CHECK(bound[3] == 3);
}

TEST_CASE("epsilon bound is 5 for the perturbed solid torus", "[cohomology]") {
    std::mt19937_64 rng(57);
    const ConstrainedPresentation pres = pres_rnatpi();
    for (int i = 0; i < 25; ++i) {
        const SphereCoord c = random_sphere_coord(rng);
        CHECK(epsilon_bound(pres, rnatpi_family(c)) == 5);
    }
    // includes the poles
    CHECK(epsilon_bound(pres, rnatpi_family({0.0, 0.0})) == 5);
    CHECK(epsilon_bound(pres, rnatpi_family({kPi, 2.0})) == 5);
}

TEST_CASE("epsilon bound is 7 for R(T^2,2) over the sphere Lagrangian",
          "[cohomology]") {
    std::mt19937_64 rng(58);
    const ConstrainedPresentation pres = pres_rt22();
    for (int i = 0; i < 25; ++i) {
        const SphereCoord c = random_sphere_coord(rng);
        CHECK(epsilon_bound(pres, rt22_family(c)) == 7);
    }
}

TEST_CASE("cocycle dimension inequalities along the family", "[cohomology]") {
    std::mt19937_64 rng(59);
    for (int i = 0; i < 10; ++i) {
        const SphereCoord c = random_sphere_coord(rng);
        for (const auto& [pres, fam] :
             {std::pair{pres_rnatpi(), rnatpi_family(c)},
              std::pair{pres_rt22(), rt22_family(c)}}) {
            const int bound = epsilon_bound(pres, fam);
            const int z1_at_0 = z1_dim(pres, fam(0.0), 0.0);
            for (const double eps : {1e-2, 1e-1}) {
                const int z1_at_eps = z1_dim(pres, fam(eps), eps);
                CHECK(z1_at_eps <= bound);
                CHECK(bound <= z1_at_0);
            }
        }
    }
}

TEST_CASE("invalid basepoints are rejected", "[cohomology]") {
    const ConstrainedPresentation pres = pres_disk();
    const Assignment bad{exp_su2(kZAxis, 0.4), exp_su2(kXAxis, 0.3)};  // tr a != 0
    CHECK_THROWS_AS(linearize_checked(pres, bad, 0.0), InvalidBasepoint);
}

TEST_CASE("presentation text format round trip", "[cohomology]") {
    const std::string text = R"(# perturbed solid torus
gens a A B h
rel - h a B h^-1 B^-1 a^-1
con tr(a)
con tr(h a^-1 h^-1)
con tr(h)
con eps * trp(h^-1 A, x) - trp(B, x)
con eps * trp(h^-1 A, y) - trp(B, y)
con eps * trp(h^-1 A, z) - trp(B, z)
)";
    const ConstrainedPresentation parsed = parse_presentation(text);
    CHECK(parsed.generators == std::vector<std::string>{"a", "A", "B", "h"});
    REQUIRE(parsed.m() == 1);
    CHECK(parsed.relations[0].sign == -1);
    REQUIRE(parsed.q() == 6);

    // the parsed presentation computes the same invariants as the built-in
    std::mt19937_64 rng(60);
    const SphereCoord c = random_sphere_coord(rng);
    const Assignment rho = rnatpi_family(c)(0.1);
    CHECK(z1_dim(parsed, rho, 0.1) == z1_dim(pres_rnatpi(), rho, 0.1));
    CHECK(epsilon_bound(parsed, rnatpi_family(c)) == 5);

    const std::string zex = R"(gens g
con eps * tr2(g) + eps^2 * tr(g)
)";
    const ConstrainedPresentation pz = parse_presentation(zex);
    REQUIRE(pz.q() == 1);
    REQUIRE(pz.constraints[0].size() == 2);
    CHECK(pz.constraints[0][0].eps_power == 1);
    CHECK(pz.constraints[0][0].kind == BaseKind::TraceSquared);
    CHECK(pz.constraints[0][1].eps_power == 2);
    CHECK(epsilon_bound(pz, z_example_family()) == 3);

    CHECK_THROWS_AS(parse_presentation("gens a\ncon tr(b)\n"), PresentationParseError);
    CHECK_THROWS_AS(parse_presentation("bogus\n"), PresentationParseError);
}
