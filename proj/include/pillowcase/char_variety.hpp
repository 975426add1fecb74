#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "pillowcase/su2.hpp"

namespace pillowcase {

/// Images (A,B,a,b) of the generators of pi_1(T^2 - {p1,p2}), subject to
/// [A,B]ab = 1 with a, b traceless.  The fields h, w are present for
/// tuples lifted from the perturbed solid-torus variety, where h is
/// traceless and w = -1.
struct RepTuple {
    Su2 A, B, a, b;
    std::optional<Su2> h;
    std::optional<Su2> w;
};

inline Su2 relation_holonomy(const RepTuple& rho) {
    return mul(commutator(rho.A, rho.B), mul(rho.a, rho.b));
}

/// Max violation of the defining invariants ([A,B]ab = 1, tracelessness,
/// w = -1 when present).
inline double rep_tuple_residual(const RepTuple& rho) {
    double r = distance(relation_holonomy(rho), Su2::identity());
    r = std::max(r, std::abs(rho.a.c0));
    r = std::max(r, std::abs(rho.b.c0));
    if (rho.h) r = std::max(r, std::abs(rho.h->c0));
    if (rho.w) r = std::max(r, distance(*rho.w, -Su2::identity()));
    return r;
}

inline void check_rep_tuple(const RepTuple& rho, double tol = 1e-8) {
    if (rep_tuple_residual(rho) > tol)
        throw std::invalid_argument("RepTuple invariants violated");
}

inline RepTuple conjugate_tuple(const Su2& g, const RepTuple& rho) {
    RepTuple out;
    out.A = conjugate(g, rho.A);
    out.B = conjugate(g, rho.B);
    out.a = conjugate(g, rho.a);
    out.b = conjugate(g, rho.b);
    if (rho.h) out.h = conjugate(g, *rho.h);
    if (rho.w) out.w = conjugate(g, *rho.w);
    return out;
}

/// mu([rho]) = (1/2) tr([A,B]) = (1/2) tr((ab)^{-1}), valued in [-1,1].
inline double mu(const RepTuple& rho) {
    return commutator(rho.A, rho.B).c0;
}

/// Conjugation-invariant coordinates: the fixed list of trace functions
/// {tr A, tr B, tr Aa, tr Ba, tr Ab, tr Bb, tr AB, tr ABa}.
using TraceProfile = std::array<double, 8>;

inline TraceProfile trace_profile(const RepTuple& r) {
    const Su2 AB = mul(r.A, r.B);
    return {r.A.trace(),
            r.B.trace(),
            mul(r.A, r.a).trace(),
            mul(r.B, r.a).trace(),
            mul(r.A, r.b).trace(),
            mul(r.B, r.b).trace(),
            AB.trace(),
            mul(AB, r.a).trace()};
}

inline double profile_distance(const TraceProfile& p, const TraceProfile& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        d = std::max(d, std::abs(p[i] - q[i]));
    return d;
}

/// Point separation on R(T^2,2).  Zero (up to tolerance) identifies equal
/// nonabelian points; abelian boundary points are not guaranteed to be
/// separated.
inline double rep_distance(const RepTuple& r1, const RepTuple& r2) {
    return profile_distance(trace_profile(r1), trace_profile(r2));
}

enum class Chart { P3, P4 };

inline constexpr double kChartTol = 1e-8;

inline Chart classify(const RepTuple& rho) {
    return std::abs(mu(rho) - 1.0) < kChartTol ? Chart::P3 : Chart::P4;
}

/// A point of R(T^2,2) in chart coordinates.  P3 carries pillowcase-fiber
/// coordinates (alpha,beta,gamma); P4 carries the pair (a_hat, -b_hat)
/// off the diagonal.
struct ChartPoint {
    Chart chart = Chart::P3;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    Vec3 a_hat{}, minus_b_hat{};

    static ChartPoint p3(double alpha, double beta, double gamma) {
        ChartPoint pt;
        pt.chart = Chart::P3;
        pt.alpha = alpha;
        pt.beta = beta;
        pt.gamma = gamma;
        return pt;
    }
    static ChartPoint p4(const Vec3& a_hat, const Vec3& minus_b_hat) {
        ChartPoint pt;
        pt.chart = Chart::P4;
        pt.a_hat = a_hat;
        pt.minus_b_hat = minus_b_hat;
        return pt;
    }
};

struct NotInP3 : std::runtime_error {
    NotInP3() : std::runtime_error("point is not in the piece P3 (mu != 1)") {}
};
struct NotInP4 : std::runtime_error {
    NotInP4() : std::runtime_error("point is not in the piece P4 (mu = 1)") {}
};
struct NormalizationFailure : std::runtime_error {
    explicit NormalizationFailure(const std::string& what)
        : std::runtime_error("chart normalization failed: " + what) {}
};
struct OnDiagonal : std::runtime_error {
    OnDiagonal() : std::runtime_error("P4 chart point lies on the diagonal") {}
};

inline double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t == kTwoPi) t = 0.0;
    return t;
}

inline bool at_pillowcase_point(double alpha, double beta, double tol = 1e-10) {
    return std::abs(std::sin(alpha)) < tol && std::abs(std::sin(beta)) < tol;
}

/// Reduce P3 coordinates to the fundamental domain alpha in [0,2pi),
/// beta in [0,pi], using (alpha,beta,gamma) ~ (-alpha,-beta,-gamma) and
/// 2pi-periodicity; gamma = 0 on the point fibers over pillowcase points.
inline ChartPoint canonical_p3(double alpha, double beta, double gamma) {
    constexpr double seam = 1e-12;
    alpha = wrap_angle(alpha);
    beta = wrap_angle(beta);
    if (beta > kPi) {
        alpha = wrap_angle(-alpha);
        beta = kTwoPi - beta;
        gamma = -gamma;
    }
    if ((beta < seam || std::abs(beta - kPi) < seam) && alpha > kPi) {
        alpha = kTwoPi - alpha;
        gamma = -gamma;
    }
    if (at_pillowcase_point(alpha, beta)) gamma = 0.0;
    return ChartPoint::p3(alpha, beta, gamma);
}

/// The normal-form representative of P3 coordinates:
/// A = e^{i alpha sigma_z}, B = e^{i beta sigma_z},
/// a = i sigma_x cos gamma + i sigma_z sin gamma, b = a^{-1}.
inline RepTuple from_chart_p3(double alpha, double beta, double gamma) {
    RepTuple rho;
    rho.A = exp_su2(kZAxis, alpha);
    rho.B = exp_su2(kZAxis, beta);
    rho.a = Su2::pure({std::cos(gamma), 0.0, std::sin(gamma)});
    rho.b = rho.a.inverse();
    return rho;
}

inline RepTuple from_chart_p3(const ChartPoint& pt) {
    return from_chart_p3(pt.alpha, pt.beta, pt.gamma);
}

namespace detail {

/// Rotation about z aligning the xy-part of v with the positive x axis.
inline Su2 z_rotation_to_xz(const Vec3& v) {
    const double r = std::hypot(v.x, v.y);
    if (r < 1e-14) return Su2::identity();
    return exp_su2(kZAxis, 0.5 * std::atan2(v.y, v.x));
}

}  // namespace detail

/// Conjugate a mu = 1 tuple to the commuting normal form and read off
/// (alpha, beta, gamma) in the fundamental domain.
inline ChartPoint to_chart_p3(const RepTuple& rho_in) {
    if (std::abs(mu(rho_in) - 1.0) >= kChartTol) throw NotInP3{};

    const Vec3 u = rho_in.A.vec();
    const Vec3 v = rho_in.B.vec();
    const double nu = u.norm();
    const double nv = v.norm();

    Vec3 axis = kZAxis;
    if (nu >= 1e-12) {
        axis = u * (1.0 / nu);
        if ((v - (v.dot(axis)) * axis).norm() > 1e-6)
            throw NormalizationFailure("A and B do not share an axis");
    } else if (nv >= 1e-12) {
        axis = v * (1.0 / nv);
    }
    const double alpha = std::atan2(u.dot(axis), rho_in.A.c0);
    const double beta = std::atan2(v.dot(axis), rho_in.B.c0);

    RepTuple rho = conjugate_tuple(rotation_taking(axis, kZAxis), rho_in);
    rho = conjugate_tuple(detail::z_rotation_to_xz(rho.a.vec()), rho);

    if (std::abs(rho.a.c0) > 1e-8)
        throw NormalizationFailure("puncture holonomy a is not traceless");
    if (distance(rho.b, rho.a.inverse()) > 1e-6)
        throw NormalizationFailure("b != a^{-1} at mu = 1");

    const Vec3 ahat = rho.a.vec();
    const double gamma = std::atan2(ahat.z, std::hypot(ahat.x, ahat.y));

    if (distance(rho.A, exp_su2(kZAxis, alpha)) > 1e-6 ||
        distance(rho.B, exp_su2(kZAxis, beta)) > 1e-6)
        throw NormalizationFailure("diagonalization of (A,B) did not converge");

    return canonical_p3(alpha, beta, gamma);
}

/// Conjugate a mu < 1 tuple to the unique representative with
/// B = cos(beta) + i sigma_z sin(beta), sin(beta) > 0, and A having zero
/// i sigma_y part and positive i sigma_x part; read off (a_hat, -b_hat).
inline ChartPoint to_chart_p4(const RepTuple& rho_in) {
    if (std::abs(mu(rho_in) - 1.0) < kChartTol) throw NotInP4{};

    const Vec3 v = rho_in.B.vec();
    const double nv = v.norm();
    if (nv < 1e-12) throw NormalizationFailure("B central on P4");

    RepTuple rho = conjugate_tuple(rotation_taking(v * (1.0 / nv), kZAxis), rho_in);
    rho = conjugate_tuple(detail::z_rotation_to_xz(rho.A.vec()), rho);

    if (std::hypot(rho.A.cx, rho.A.cy) < 1e-12)
        throw NormalizationFailure("A diagonal on P4");
    if (std::abs(rho.a.c0) > 1e-8 || std::abs(rho.b.c0) > 1e-8)
        throw NormalizationFailure("puncture holonomies not traceless");

    return ChartPoint::p4(rho.a.vec().normalized(), -(rho.b.vec().normalized()));
}

inline ChartPoint to_chart(const RepTuple& rho) {
    return classify(rho) == Chart::P3 ? to_chart_p3(rho) : to_chart_p4(rho);
}

/// Inverse of to_chart_p4: rebuild (A,B,a,b) from (a_hat, -b_hat).
inline RepTuple from_chart_p4(const ChartPoint& pt) {
    if (pt.chart != Chart::P4)
        throw std::invalid_argument("from_chart_p4: not a P4 chart point");
    const Vec3 ahat = pt.a_hat;
    const Vec3 bhat = -pt.minus_b_hat;

    const double t = -ahat.dot(bhat);
    if (t > 1.0 - 1e-10) throw OnDiagonal{};

    RepTuple rho;
    rho.a = Su2::pure(ahat);
    rho.b = Su2::pure(bhat);

    if (t < -1.0 + 1e-12) {
        rho.A = Su2::pure(kXAxis);  // i sigma_x
        rho.B = Su2::pure(kZAxis);  // i sigma_z
        return rho;
    }

    const Vec3 vhat = ahat.cross(bhat).normalized();
    const double z = vhat.z;
    const double cot_beta = -z * std::sqrt((1.0 + t) / (1.0 - t));
    const double beta = std::atan2(1.0, cot_beta);
    const double alpha = std::atan2(vhat.x, vhat.y) - beta;

    const double c2b = std::cos(2.0 * beta);
    const double r = std::sqrt(std::max(0.0, (t - c2b) / (1.0 - c2b)));
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));

    rho.A = Su2{r * std::cos(alpha), s, 0.0, r * std::sin(alpha)}.normalized();
    rho.B = exp_su2(kZAxis, beta);
    return rho;
}

/// Random point of P4 with the relation and tracelessness built in:
/// A, B Haar-uniform, a a uniform traceless solution of tr(b) = 0 with
/// b = a^{-1}[A,B]^{-1}.
template <class Rng>
RepTuple random_rep_tuple(Rng& rng) {
    for (;;) {
        RepTuple rho;
        rho.A = random_su2(rng);
        rho.B = random_su2(rng);
        const Su2 comm = commutator(rho.A, rho.B);
        const Vec3 v = comm.vec();
        if (v.norm() < 1e-3) continue;  // nearly commuting; resample
        const Vec3 vhat = v.normalized();
        Vec3 e1 = std::abs(vhat.x) < 0.9 ? vhat.cross(kXAxis) : vhat.cross(kYAxis);
        e1 = e1.normalized();
        const Vec3 e2 = vhat.cross(e1);
        std::uniform_real_distribution<double> angle(0.0, kTwoPi);
        const double tau = angle(rng);
        rho.a = Su2::pure(std::cos(tau) * e1 + std::sin(tau) * e2);
        rho.b = mul(rho.a.inverse(), comm.inverse());
        return rho;
    }
}

}  // namespace pillowcase
