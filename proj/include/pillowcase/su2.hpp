#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pillowcase {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

/// Vector in R^3; doubles as an su(2) Lie-algebra element in the basis
/// {i*sigma_x, i*sigma_y, i*sigma_z}.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::domain_error("Vec3::normalized: zero vector");
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline const Vec3 kXAxis{1.0, 0.0, 0.0};
inline const Vec3 kYAxis{0.0, 1.0, 0.0};
inline const Vec3 kZAxis{0.0, 0.0, 1.0};

/// Lie bracket of su(2) in the i*sigma basis: [u,v] = uv - vu = -2 u x v.
inline Vec3 bracket(const Vec3& u, const Vec3& v) { return -2.0 * u.cross(v); }

enum class Axis { X, Y, Z };

/// Element of SU(2) stored as a unit quaternion
///   g = c0 + cx*(i sigma_x) + cy*(i sigma_y) + cz*(i sigma_z).
///
/// The basis elements square to -1 and multiply by
/// (i sigma_j)(i sigma_k) = -eps_{jkl} (i sigma_l), which is quaternion
/// multiplication with the cross-product sign reversed.  tr(g) = 2*c0.
struct Su2 {
    double c0 = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    double cz = 0.0;

    static Su2 identity() { return {1.0, 0.0, 0.0, 0.0}; }

    /// Pure Lie-algebra element promoted to a (non-unit) quaternion.
    static Su2 pure(const Vec3& v) { return {0.0, v.x, v.y, v.z}; }

    double norm() const {
        return std::sqrt(c0 * c0 + cx * cx + cy * cy + cz * cz);
    }

    Su2 normalized() const {
        const double n = norm();
        return {c0 / n, cx / n, cy / n, cz / n};
    }

    Su2 inverse() const { return {c0, -cx, -cy, -cz}; }

    Su2 operator-() const { return {-c0, -cx, -cy, -cz}; }

    Vec3 vec() const { return {cx, cy, cz}; }

    double trace() const { return 2.0 * c0; }

    bool is_traceless(double tol = 1e-10) const { return std::abs(c0) <= tol; }
};

/// Quaternion product without renormalization; also valid for non-unit
/// arguments (used for Lie-algebra sandwiches).
inline Su2 raw_mul(const Su2& g, const Su2& h) {
    const Vec3 p = g.vec();
    const Vec3 q = h.vec();
    const Vec3 v = g.c0 * q + h.c0 * p - p.cross(q);
    return {g.c0 * h.c0 - p.dot(q), v.x, v.y, v.z};
}

/// Group product.  Renormalizes so that long words do not drift off the
/// unit sphere.
inline Su2 mul(const Su2& g, const Su2& h) { return raw_mul(g, h).normalized(); }

inline Su2 operator*(const Su2& g, const Su2& h) { return mul(g, h); }

/// exp(angle * v) = cos(angle) + sin(angle) * (v . i sigma), v a unit vector.
inline Su2 exp_su2(const Vec3& axis, double angle) {
    const double s = std::sin(angle);
    return {std::cos(angle), s * axis.x, s * axis.y, s * axis.z};
}

struct AxisAngle {
    Vec3 axis;
    double angle;  // in [0, pi]
};

/// Inverse of exp_su2: angle in [0, pi]; the axis is arbitrary (z by
/// convention) when g is central.
inline AxisAngle log_su2(const Su2& g) {
    const Vec3 v = g.vec();
    const double s = v.norm();
    const double angle = std::atan2(s, g.c0);
    if (s < 1e-14) return {kZAxis, angle};
    return {v * (1.0 / s), angle};
}

inline Su2 conjugate(const Su2& g, const Su2& x) {
    return mul(mul(g, x), g.inverse());
}

inline Su2 commutator(const Su2& g, const Su2& h) {
    return mul(mul(g, h), mul(g.inverse(), h.inverse()));
}

/// Adjoint action Ad_g on the Lie algebra: the rotation v -> g v g^{-1}.
inline Vec3 adjoint(const Su2& g, const Vec3& v) {
    return raw_mul(raw_mul(g, Su2::pure(v)), g.inverse()).vec();
}

/// tr(g sigma_i) stripped of its imaginary unit: the matrix trace is
/// 2i*c_i, and this returns the real number 2*c_i.
inline double trace_pair(const Su2& g, Axis i) {
    switch (i) {
        case Axis::X: return 2.0 * g.cx;
        case Axis::Y: return 2.0 * g.cy;
        case Axis::Z: return 2.0 * g.cz;
    }
    return 0.0;
}

/// Some g whose adjoint rotation takes `from` to `to` (both unit).
inline Su2 rotation_taking(const Vec3& from, const Vec3& to) {
    const double c = from.dot(to);
    const Vec3 axis = from.cross(to);
    const double s = axis.norm();
    if (s < 1e-14) {
        if (c > 0.0) return Su2::identity();
        // antipodal: rotate by pi about any axis orthogonal to `from`
        Vec3 ortho = std::abs(from.x) < 0.9 ? from.cross(kXAxis)
                                            : from.cross(kYAxis);
        return exp_su2(ortho.normalized(), -kHalfPi);
    }
    // Ad_{exp(m, t)} rotates by -2t about m in this basis.
    const double angle = std::atan2(s, c);
    return exp_su2(axis * (1.0 / s), -0.5 * angle);
}

/// Haar-uniform random SU(2) element.
template <class Rng>
Su2 random_su2(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Su2 g{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    return g.normalized();
}

/// Uniform random unit vector in R^3.
template <class Rng>
Vec3 random_unit_vec(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double n = v.norm();
    if (n < 1e-12) return kZAxis;
    return v * (1.0 / n);
}

inline double distance(const Su2& g, const Su2& h) {
    return std::sqrt((g.c0 - h.c0) * (g.c0 - h.c0) + (g.cx - h.cx) * (g.cx - h.cx) +
                     (g.cy - h.cy) * (g.cy - h.cy) + (g.cz - h.cz) * (g.cz - h.cz));
}

}  // namespace pillowcase
