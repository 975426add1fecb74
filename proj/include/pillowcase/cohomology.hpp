#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pillowcase/su2.hpp"

namespace pillowcase::cohomology {

/// Letter s_k^{+1} or s_k^{-1} in the free group on the presentation's
/// generators (exponents beyond +-1 are expanded on construction).
struct WordLetter {
    int gen;
    int exp;  // +1 or -1
};

using Word = std::vector<WordLetter>;

inline Word word(std::initializer_list<WordLetter> letters) {
    Word w;
    for (const auto& l : letters) {
        const int unit = l.exp >= 0 ? 1 : -1;
        for (int i = 0; i < std::abs(l.exp); ++i) w.push_back({l.gen, unit});
    }
    return w;
}

enum class BaseKind { Trace, TraceSquared, TracePair };

/// One term of a constraint function: coeff * eps^p * base(rho), where
/// base is tr(rho(w)), (tr rho(w))^2, or the trace-pair tr(rho(w) sigma_i)
/// stripped of its imaginary unit.
struct ConstraintTerm {
    double coeff = 1.0;
    int eps_power = 0;
    BaseKind kind = BaseKind::Trace;
    Word w;
    Axis axis = Axis::X;
};

using Constraint = std::vector<ConstraintTerm>;

/// Relation rho(w) = sign * 1.
struct Relation {
    Word w;
    int sign = 1;
};

struct ConstrainedPresentation {
    std::vector<std::string> generators;
    std::vector<Relation> relations;
    std::vector<Constraint> constraints;

    int n() const { return static_cast<int>(generators.size()); }
    int m() const { return static_cast<int>(relations.size()); }
    int q() const { return static_cast<int>(constraints.size()); }
};

/// Images of the generators under a homomorphism.
using Assignment = std::vector<Su2>;

/// A family of basepoints parameterized by the control parameter.
using BasepointFamily = std::function<Assignment(double)>;

struct InvalidBasepoint : std::runtime_error {
    explicit InvalidBasepoint(const std::string& what)
        : std::runtime_error("invalid basepoint: " + what) {}
};

inline Su2 evaluate(const Word& w, const Assignment& rho) {
    Su2 g = Su2::identity();
    for (const auto& letter : w)
        g = mul(g, letter.exp > 0 ? rho[letter.gen] : rho[letter.gen].inverse());
    return g;
}

inline double evaluate_base(const ConstraintTerm& term, const Assignment& rho) {
    const Su2 g = evaluate(term.w, rho);
    switch (term.kind) {
        case BaseKind::Trace: return g.trace();
        case BaseKind::TraceSquared: return g.trace() * g.trace();
        case BaseKind::TracePair: return trace_pair(g, term.axis);
    }
    return 0.0;
}

inline double evaluate_constraint(const Constraint& con, const Assignment& rho,
                                  double eps) {
    double v = 0.0;
    for (const auto& term : con)
        v += term.coeff * std::pow(eps, term.eps_power) * evaluate_base(term, rho);
    return v;
}

inline Eigen::Matrix3d adjoint_matrix(const Su2& g) {
    Eigen::Matrix3d m;
    const Vec3 cols[3] = {adjoint(g, kXAxis), adjoint(g, kYAxis), adjoint(g, kZAxis)};
    for (int j = 0; j < 3; ++j) {
        m(0, j) = cols[j].x;
        m(1, j) = cols[j].y;
        m(2, j) = cols[j].z;
    }
    return m;
}

namespace detail {

inline Eigen::Matrix3d cross_matrix(const Vec3& w) {
    Eigen::Matrix3d m;
    m << 0.0, -w.z, w.y,
         w.z, 0.0, -w.x,
        -w.y, w.x, 0.0;
    return m;
}

/// Coefficient matrix of the left-logarithmic derivative of rho_t(w):
/// d/dt rho_t(w)|_0 = u(w) rho(w) with u(w) = U * eta, U of size 3 x 3n.
/// Built letter by letter with Ad-transport of the prefix.
inline Eigen::MatrixXd word_derivative(const Word& w, const Assignment& rho) {
    const int n = static_cast<int>(rho.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(3, 3 * n);
    Eigen::Matrix3d prefix = Eigen::Matrix3d::Identity();
    for (const auto& letter : w) {
        const Su2& g = rho[letter.gen];
        if (letter.exp > 0) {
            u.block<3, 3>(0, 3 * letter.gen) += prefix;
            prefix = prefix * adjoint_matrix(g);
        } else {
            const Eigen::Matrix3d ad_inv = adjoint_matrix(g.inverse());
            u.block<3, 3>(0, 3 * letter.gen) -= prefix * ad_inv;
            prefix = prefix * ad_inv;
        }
    }
    return u;
}

/// Row of the differential of a constraint base function, as 1 x 3n.
inline Eigen::RowVectorXd base_row(const ConstraintTerm& term, const Assignment& rho) {
    const Eigen::MatrixXd u = word_derivative(term.w, rho);
    const Su2 g = evaluate(term.w, rho);
    const Eigen::RowVector3d wvec(g.cx, g.cy, g.cz);
    switch (term.kind) {
        case BaseKind::Trace:
            // d tr = -2 <u, vec(rho(w))>
            return -2.0 * (wvec * u);
        case BaseKind::TraceSquared:
            return -4.0 * g.trace() * (wvec * u);
        case BaseKind::TracePair: {
            // vector part of u * rho(w) is (w0 I + cross(vec)) u
            const Eigen::Matrix3d lin =
                g.c0 * Eigen::Matrix3d::Identity() + cross_matrix(g.vec());
            const Eigen::MatrixXd rows = 2.0 * (lin * u);
            return rows.row(static_cast<int>(term.axis));
        }
    }
    return Eigen::RowVectorXd::Zero(3 * rho.size());
}

}  // namespace detail

inline void validate_basepoint(const ConstrainedPresentation& pres, const Assignment& rho,
                               double eps, double tol = 1e-8) {
    if (static_cast<int>(rho.size()) != pres.n())
        throw InvalidBasepoint("assignment size does not match generator count");
    for (int i = 0; i < pres.m(); ++i) {
        const Su2 target = pres.relations[i].sign > 0 ? Su2::identity() : -Su2::identity();
        if (distance(evaluate(pres.relations[i].w, rho), target) > tol)
            throw InvalidBasepoint("relation " + std::to_string(i) + " violated");
    }
    for (int j = 0; j < pres.q(); ++j) {
        if (std::abs(evaluate_constraint(pres.constraints[j], rho, eps)) > tol)
            throw InvalidBasepoint("constraint " + std::to_string(j) + " violated");
    }
}

/// The linearized relation-and-constraint map c : g^n -> g^m + R^q at a
/// basepoint, as a (3m + q) x 3n real matrix.
inline Eigen::MatrixXd linearize(const ConstrainedPresentation& pres, const Assignment& rho,
                                 double eps) {
    const int n = pres.n();
    Eigen::MatrixXd c(3 * pres.m() + pres.q(), 3 * n);
    for (int i = 0; i < pres.m(); ++i)
        c.middleRows<3>(3 * i) = detail::word_derivative(pres.relations[i].w, rho);
    for (int j = 0; j < pres.q(); ++j) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(3 * n);
        for (const auto& term : pres.constraints[j])
            row += term.coeff * std::pow(eps, term.eps_power) * detail::base_row(term, rho);
        c.row(3 * pres.m() + j) = row;
    }
    return c;
}

inline Eigen::MatrixXd linearize_checked(const ConstrainedPresentation& pres,
                                         const Assignment& rho, double eps) {
    validate_basepoint(pres, rho, eps);
    return linearize(pres, rho, eps);
}

inline constexpr double kRankTolFactor = 1e-7;

inline int rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (smax < 1e-12) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > kRankTolFactor * smax) ++r;
    return r;
}

/// Orthonormal basis of the kernel, as columns.
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return Eigen::MatrixXd(0, 0);
    if (m.rows() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const int r = rank(m);
    return svd.matrixV().rightCols(m.cols() - r);
}

/// Coboundary map g -> g^n, u -> (u - Ad_{rho(s_k)} u)_k, as 3n x 3.
inline Eigen::MatrixXd coboundary_matrix(const Assignment& rho) {
    const int n = static_cast<int>(rho.size());
    Eigen::MatrixXd b(3 * n, 3);
    for (int k = 0; k < n; ++k)
        b.middleRows<3>(3 * k) = Eigen::Matrix3d::Identity() - adjoint_matrix(rho[k]);
    return b;
}

inline int z1_dim(const ConstrainedPresentation& pres, const Assignment& rho, double eps) {
    return 3 * pres.n() - rank(linearize_checked(pres, rho, eps));
}

inline int b1_dim(const Assignment& rho) { return rank(coboundary_matrix(rho)); }

inline int h1_dim(const ConstrainedPresentation& pres, const Assignment& rho,
                  double eps = 0.0) {
    return z1_dim(pres, rho, eps) - b1_dim(rho);
}

/// Taylor coefficients c_eps = c0 + eps*c1 + ... of the linearized map
/// along a basepoint family; c1 via fourth-order central differences.
struct TaylorSplit {
    Eigen::MatrixXd c0;
    Eigen::MatrixXd c1;
};

inline TaylorSplit taylor_split(const ConstrainedPresentation& pres,
                                const BasepointFamily& family, double step = 1e-3) {
    const auto c_at = [&](double eps) { return linearize(pres, family(eps), eps); };
    TaylorSplit split;
    split.c0 = c_at(0.0);
    split.c1 = (-c_at(2.0 * step) + 8.0 * c_at(step) - 8.0 * c_at(-step) +
                c_at(-2.0 * step)) /
               (12.0 * step);
    return split;
}

/// dim(ker c0 ∩ ker c1) + dim(c1(ker c0) ∩ im c0): the middle quantity of
/// the cocycle-dimension bound, by rank identities.
inline int epsilon_bound(const ConstrainedPresentation& pres, const BasepointFamily& family) {
    validate_basepoint(pres, family(0.0), 0.0);
    const TaylorSplit split = taylor_split(pres, family);

    Eigen::MatrixXd stacked(split.c0.rows() + split.c1.rows(), split.c0.cols());
    stacked << split.c0, split.c1;
    const int dim_kk = static_cast<int>(split.c0.cols()) - rank(stacked);

    const Eigen::MatrixXd k0 = kernel_basis(split.c0);
    const Eigen::MatrixXd u = split.c1 * k0;
    const int rank_u = rank(u);
    const int rank_c0 = rank(split.c0);
    Eigen::MatrixXd joined(split.c0.rows(), u.cols() + split.c0.cols());
    joined << u, split.c0;
    const int dim_int = rank_u + rank_c0 - rank(joined);

    return dim_kk + dim_int;
}

}  // namespace pillowcase::cohomology
