#pragma once

#include <cmath>
#include <stdexcept>

#include "pillowcase/char_variety.hpp"
#include "pillowcase/su2.hpp"

namespace pillowcase {

/// Coordinates on the disk variety R(S^1 x D^2, A_1):
/// chi in [0,pi], psi in [-pi/2,pi/2], with psi = 0 at chi in {0,pi}.
struct DiskCoord {
    double chi = 0.0;
    double psi = 0.0;
};

/// Spherical-polar coordinates on the perturbed variety:
/// phi in [0,pi], theta in [0,2pi); theta is arbitrary at the poles and
/// reported as 0 there by convention.
struct SphereCoord {
    double phi = 0.0;
    double theta = 0.0;
};

enum class PerturbationShape { Sine, AlgebraicArcsine };

/// Holonomy perturbation nu = eps * f(phi).  Sine means f(phi) = sin(phi);
/// AlgebraicArcsine means f(phi) = (1/eps) asin(eps sin(phi)), the shape
/// under which the perturbation condition is a polynomial constraint.
struct PerturbationConfig {
    double epsilon = 0.1;
    PerturbationShape shape = PerturbationShape::Sine;

    void validate() const {
        if (!(epsilon >= 0.0) || epsilon >= 0.5)
            throw std::invalid_argument("PerturbationConfig: need 0 <= epsilon < 0.5");
    }

    double nu(double phi) const {
        return shape == PerturbationShape::Sine
                   ? epsilon * std::sin(phi)
                   : std::asin(epsilon * std::sin(phi));
    }

    double nu_dphi(double phi) const {
        const double c = epsilon * std::cos(phi);
        if (shape == PerturbationShape::Sine) return c;
        const double s = epsilon * std::sin(phi);
        return c / std::sqrt(1.0 - s * s);
    }
};

struct PerturbationTooLarge : std::runtime_error {
    PerturbationTooLarge()
        : std::runtime_error(
              "perturbation fails the monotonicity criterion (epsilon too "
              "large or zero)") {}
};

/// L_d(chi,psi): a = i sigma_x cos psi + i sigma_z sin psi, b = a^{-1},
/// A = e^{i chi sigma_z}, B = 1.  Always lies in P3 with mu = 1.
inline RepTuple disk_rep(const DiskCoord& c) {
    RepTuple rho;
    rho.a = Su2::pure({std::cos(c.psi), 0.0, std::sin(c.psi)});
    rho.b = rho.a.inverse();
    rho.A = exp_su2(kZAxis, c.chi);
    rho.B = Su2::identity();
    return rho;
}

/// L_s(phi,theta) at meridian angle nu:
///   a = i sigma_z,
///   h = (cos^2 nu + sin^2 nu sin^2 theta)^{-1/2}
///       (i sigma_x cos nu - i sigma_z sin nu sin theta),
///   A = h (cos phi + i sin phi (sigma_x cos theta + sigma_y sin theta)),
///   B = cos nu + i sin nu (sigma_x cos theta + sigma_y sin theta),
///   b = -h a^{-1} h^{-1},  w = -1.
/// Entire in nu; used directly by the cohomology basepoint families.
inline RepTuple sphere_rep_nu(double phi, double theta, double nu) {
    const Vec3 rhat{std::cos(theta), std::sin(theta), 0.0};
    const double cn = std::cos(nu);
    const double sn = std::sin(nu);
    const double st = std::sin(theta);
    const double inv_d = 1.0 / std::sqrt(cn * cn + sn * sn * st * st);

    RepTuple rho;
    rho.a = Su2::pure(kZAxis);
    const Su2 h = Su2::pure({inv_d * cn, 0.0, -inv_d * sn * st});
    rho.h = h;
    rho.A = mul(h, exp_su2(rhat, phi));
    rho.B = exp_su2(rhat, nu);
    rho.b = -mul(mul(h, rho.a.inverse()), h.inverse());
    rho.w = -Su2::identity();
    return rho;
}

/// The tuple over L_s(phi,theta) with nu = eps * f(phi).
inline RepTuple sphere_rep(const SphereCoord& c, const PerturbationConfig& p) {
    return sphere_rep_nu(c.phi, c.theta, p.nu(c.phi));
}

/// The closed-form trace functions evaluated on L_s(phi,theta).
struct SphereTraces {
    double tr_A, tr_B, tr_Aa, tr_Ba, tr_Ab, tr_AB, mu;
};

inline SphereTraces sphere_traces(const SphereCoord& c, const PerturbationConfig& p) {
    const double nu = p.nu(c.phi);
    const double cn = std::cos(nu);
    const double sn = std::sin(nu);
    const double st = std::sin(c.theta);
    const double ct = std::cos(c.theta);
    const double d2 = cn * cn + sn * sn * st * st;
    const double d = std::sqrt(d2);

    SphereTraces t;
    t.tr_A = -2.0 * cn * ct * std::sin(c.phi) / d;
    t.tr_B = 2.0 * cn;
    t.tr_Aa = 2.0 * std::sin(c.phi + nu) * st / d;
    t.tr_Ba = 0.0;
    t.tr_Ab = -2.0 * std::sin(c.phi - nu) * st / d;
    t.tr_AB = -2.0 * cn * ct * std::sin(c.phi + nu) / d;
    t.mu = (cn * cn - sn * sn * st * st) / d2;
    return t;
}

/// Chart coordinates of L_s(phi,theta): the theta in {0,pi} seam (and the
/// poles) lands in the pillowcase P3 with
///   (alpha,beta,gamma) = (phi +- pi/2, nu, 0),
/// and everything else lands in P4 with closed-form (a_hat, b_hat)
/// depending on the branch theta in (0,pi) versus (pi,2pi).
inline ChartPoint sphere_chart(const SphereCoord& c, const PerturbationConfig& p) {
    const double nu = p.nu(c.phi);
    const double cn = std::cos(nu);
    const double sn = std::sin(nu);
    const double st = std::sin(c.theta);
    const double ct = std::cos(c.theta);
    const double d2 = cn * cn + sn * sn * st * st;

    if (std::abs(std::sin(c.phi)) < 1e-9) {
        // both poles map to the double point
        return ChartPoint::p3(kHalfPi, 0.0, 0.0);
    }

    const double mu_val = (cn * cn - sn * sn * st * st) / d2;
    if (std::abs(mu_val - 1.0) < kChartTol) {
        const double alpha = ct >= 0.0 ? c.phi + kHalfPi : c.phi - kHalfPi;
        return canonical_p3(alpha, nu, 0.0);
    }

    const double spn = std::sin(c.phi + nu);
    const double cpn = std::cos(c.phi + nu);
    const double smn = std::sin(c.phi - nu);
    const double cmn = std::cos(c.phi - nu);
    const double inv_d2 = 1.0 / d2;

    Vec3 ahat{-spn, -cpn, 0.0};
    Vec3 bhat{inv_d2 * (cn * cn * ct * ct * spn + st * st * smn),
              inv_d2 * (cn * cn * ct * ct * cpn + st * st * cmn),
              -0.5 * inv_d2 * std::sin(2.0 * nu) * std::sin(2.0 * c.theta)};
    if (st < 0.0) {  // theta in (pi, 2pi)
        ahat = -ahat;
        bhat.x = -bhat.x;
        bhat.y = -bhat.y;
    }
    return ChartPoint::p4(ahat, -bhat);
}

enum class TraceFn { TrA, TrB, TrAa, TrBa, TrAb, TrAB, Mu };

struct Partials {
    double d_phi = 0.0;
    double d_theta = 0.0;
};

/// Analytic partial derivatives of the closed-form trace functions on
/// L_s with respect to (phi, theta).
inline Partials sphere_chart_jacobian(const SphereCoord& c, const PerturbationConfig& p,
                                      TraceFn fn) {
    const double nu = p.nu(c.phi);
    const double nup = p.nu_dphi(c.phi);
    const double cn = std::cos(nu);
    const double sn = std::sin(nu);
    const double st = std::sin(c.theta);
    const double ct = std::cos(c.theta);
    const double d2 = cn * cn + sn * sn * st * st;
    const double d = std::sqrt(d2);
    const double d2_phi = -2.0 * sn * cn * nup * ct * ct;
    const double d2_theta = 2.0 * sn * sn * st * ct;
    const double d_phi = d2_phi / (2.0 * d);
    const double d_theta = d2_theta / (2.0 * d);

    const double sp = std::sin(c.phi);
    const double cp = std::cos(c.phi);
    const double spn = std::sin(c.phi + nu);
    const double cpn = std::cos(c.phi + nu);
    const double smn = std::sin(c.phi - nu);
    const double cmn = std::cos(c.phi - nu);

    // quotient rule for k * N / d
    const auto quot = [&](double k, double n, double n_phi, double n_theta) {
        return Partials{k * (n_phi * d - n * d_phi) / d2,
                        k * (n_theta * d - n * d_theta) / d2};
    };

    switch (fn) {
        case TraceFn::TrA:
            return quot(-2.0, cn * ct * sp, ct * (-sn * nup * sp + cn * cp),
                        -st * cn * sp);
        case TraceFn::TrB:
            return {-2.0 * sn * nup, 0.0};
        case TraceFn::TrAa:
            return quot(2.0, spn * st, (1.0 + nup) * cpn * st, spn * ct);
        case TraceFn::TrBa:
            return {0.0, 0.0};
        case TraceFn::TrAb:
            return quot(-2.0, smn * st, (1.0 - nup) * cmn * st, smn * ct);
        case TraceFn::TrAB:
            return quot(-2.0, cn * ct * spn,
                        ct * (-sn * nup * spn + cn * (1.0 + nup) * cpn),
                        -st * cn * spn);
        case TraceFn::Mu: {
            const double num = cn * cn - sn * sn * st * st;
            const double num_phi = -2.0 * sn * cn * nup * (1.0 + st * st);
            const double num_theta = -2.0 * sn * sn * st * ct;
            return {(num_phi * d2 - num * d2_phi) / (d2 * d2),
                    (num_theta * d2 - num * d2_theta) / (d2 * d2)};
        }
    }
    return {};
}

/// Lift of a disk-variety point to the h,w-decorated solid-torus variety,
/// using its S^3 = {(z1,z2)} parameterization with x + iy = z1:
///   a = i sigma_z, b = a^{-1}, A = [[z1, -conj(z2)], [z2, conj(z1)]],
///   B = 1, h = i sigma_x, w = -1.
/// Over a nonabelian disk point the fiber is the circle swept by
/// fiber_angle; over an abelian point (|z1| = 1) it is a single point.
inline RepTuple disk_rep_h_w_lift(const DiskCoord& c, double fiber_angle) {
    const double x = std::cos(c.chi);
    const double y = std::sin(c.chi) * std::sin(c.psi);
    const double r = std::sqrt(std::max(0.0, 1.0 - x * x - y * y));
    const double z2_re = r * std::cos(fiber_angle);
    const double z2_im = r * std::sin(fiber_angle);

    RepTuple rho;
    rho.a = Su2::pure(kZAxis);
    rho.b = rho.a.inverse();
    rho.A = Su2{x, z2_im, -z2_re, y}.normalized();
    rho.B = Su2::identity();
    rho.h = Su2::pure(kXAxis);
    rho.w = -Su2::identity();
    return rho;
}

/// Injectivity witness F(phi) = sin(phi+nu)/sin(phi-nu) must be strictly
/// monotonic on (0,pi); checked on a grid of 10^4 points.  Returns false
/// when the perturbation is off (eps = 0) or monotonicity fails.
inline bool monotonicity_check(const PerturbationConfig& p, int grid = 10000) {
    p.validate();
    double prev = 0.0;
    int sign = 0;
    for (int i = 1; i <= grid; ++i) {
        const double phi = kPi * static_cast<double>(i) / (grid + 1);
        const double nu = p.nu(phi);
        const double f = std::sin(phi + nu) / std::sin(phi - nu);
        if (i > 1) {
            const double diff = f - prev;
            if (diff == 0.0) return false;
            const int s = diff > 0.0 ? 1 : -1;
            if (sign == 0) sign = s;
            else if (s != sign) return false;
        }
        prev = f;
    }
    return sign != 0;
}

}  // namespace pillowcase
