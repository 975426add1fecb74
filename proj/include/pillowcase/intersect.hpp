#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "pillowcase/char_variety.hpp"
#include "pillowcase/lagrangians.hpp"
#include "pillowcase/mcg.hpp"

namespace pillowcase {

enum class KnownFamily { Generic, Trefoil, UnknotLens, SimpleLens };

/// Intersection problem for L_s against L_2 = L_d . f.
struct IntersectionProblem {
    McgWord word;
    PerturbationConfig perturbation{};
    int grid = 0;  // 0 = family default (64 generic, 128 constrained)
    double newton_tol = 1e-10;
    double match_tol = 1e-8;
    std::uint64_t seed = 0;  // recorded in provenance; the solve is deterministic
    KnownFamily family = KnownFamily::Generic;
    int p = 0;  // family parameter

    int effective_grid() const {
        if (grid != 0) return grid;
        return family == KnownFamily::Generic ? 64 : 128;
    }

    void validate() const {
        perturbation.validate();
        if (grid != 0 && grid < 64)
            throw std::invalid_argument("IntersectionProblem: grid must be >= 64");
        if (!(match_tol > newton_tol))
            throw std::invalid_argument(
                "IntersectionProblem: match tolerance must exceed Newton tolerance");
        if (p < 0) throw std::invalid_argument("IntersectionProblem: p must be >= 0");
    }
};

enum class Transverse { Yes, No, Indeterminate };

inline const char* to_string(Transverse t) {
    switch (t) {
        case Transverse::Yes: return "yes";
        case Transverse::No: return "no";
        case Transverse::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct IntersectionPoint {
    DiskCoord disk;
    SphereCoord sphere;
    ChartPoint chart;
    double residual = 0.0;
    Transverse transverse = Transverse::Indeterminate;
    bool near_double_point = false;
};

struct IntersectionReport {
    std::vector<IntersectionPoint> points;
    int count = 0;
    bool double_point_hit = false;
    bool non_transverse_point = false;
    // provenance
    std::string word_text;
    double epsilon = 0.0;
    PerturbationShape shape = PerturbationShape::Sine;
    int grid = 0;
    std::uint64_t seed = 0;
    int dropped_seeds = 0;
};

namespace detail {

inline int worker_count() {
    if (const char* env = std::getenv("PILLOWCASE_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Deterministic parallel loop: fn(i) must touch only slot i state.
template <class F>
void parallel_for(int n, F&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int t = 0; t < workers; ++t)
        threads.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : threads) th.join();
}

/// Trace profile extended by mu: the coordinates in which points of
/// R(T^2,2) are matched.
using ExtProfile = std::array<double, 9>;

inline ExtProfile ext_profile(const RepTuple& rho) {
    const TraceProfile tp = trace_profile(rho);
    ExtProfile e;
    std::copy(tp.begin(), tp.end(), e.begin());
    e[8] = mu(rho);
    return e;
}

inline double ext_distance(const ExtProfile& a, const ExtProfile& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct Params {
    double chi, psi, phi, theta;
};

inline ExtProfile disk_side_profile(const Params& x, const McgWord& word) {
    return ext_profile(act(disk_rep({x.chi, x.psi}), word));
}

inline ExtProfile sphere_side_profile(const Params& x, const PerturbationConfig& pert) {
    return ext_profile(sphere_rep({x.phi, x.theta}, pert));
}

inline Eigen::Matrix<double, 9, 1> residual_vec(const Params& x, const McgWord& word,
                                                const PerturbationConfig& pert) {
    const ExtProfile d = disk_side_profile(x, word);
    const ExtProfile s = sphere_side_profile(x, pert);
    Eigen::Matrix<double, 9, 1> r;
    for (int i = 0; i < 9; ++i) r(i) = d[i] - s[i];
    return r;
}

/// Fold (chi,psi) into chi in [0,pi], psi in [-pi/2,pi/2] using the disk
/// identifications; psi := 0 when A is central.
inline DiskCoord canonical_disk(double chi, double psi) {
    psi = std::remainder(psi, kTwoPi);
    if (psi > kPi) psi -= kTwoPi;
    if (psi > kHalfPi) psi = kPi - psi;
    else if (psi < -kHalfPi) psi = -kPi - psi;
    chi = wrap_angle(chi);
    if (chi > kPi) {
        chi = kTwoPi - chi;
        psi = -psi;
    }
    if (std::abs(std::sin(chi)) < 1e-9) psi = 0.0;
    return {chi, psi};
}

/// Fold (phi,theta) into phi in [0,pi], theta in [0,2pi); poles report
/// theta = 0.
inline SphereCoord canonical_sphere(double phi, double theta) {
    phi = std::remainder(phi, kTwoPi);
    if (phi < 0.0) {
        phi = -phi;
        theta += kPi;
    }
    if (phi > kPi) {
        phi = kTwoPi - phi;
        theta += kPi;
    }
    theta = wrap_angle(theta);
    if (std::abs(std::sin(phi)) < 1e-9) theta = 0.0;
    return {phi, theta};
}

struct Refined {
    Params x{};
    double residual = 0.0;
    bool ok = false;
};

/// Damped Gauss-Newton on the nine trace equations in (chi,psi,phi,theta).
inline Refined refine(const Params& start, const McgWord& word,
                      const PerturbationConfig& pert, double tol) {
    constexpr double fd = 1e-6;
    Params x = start;
    Eigen::Matrix<double, 9, 1> r = residual_vec(x, word, pert);
    double cost = r.squaredNorm();
    double lambda = 1e-10;

    const auto max_abs = [](const Eigen::Matrix<double, 9, 1>& v) {
        return v.cwiseAbs().maxCoeff();
    };

    for (int iter = 0; iter < 120; ++iter) {
        if (max_abs(r) < tol) return {x, max_abs(r), true};

        Eigen::Matrix<double, 9, 4> jac;
        for (int c = 0; c < 4; ++c) {
            Params xp = x, xm = x;
            double* fields_p[4] = {&xp.chi, &xp.psi, &xp.phi, &xp.theta};
            double* fields_m[4] = {&xm.chi, &xm.psi, &xm.phi, &xm.theta};
            *fields_p[c] += fd;
            *fields_m[c] -= fd;
            jac.col(c) = (residual_vec(xp, word, pert) - residual_vec(xm, word, pert)) /
                         (2.0 * fd);
        }

        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d jtr = jac.transpose() * r;

        bool stepped = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const Eigen::Vector4d delta =
                (jtj + lambda * Eigen::Matrix4d::Identity()).ldlt().solve(-jtr);
            const Params trial{x.chi + delta(0), x.psi + delta(1), x.phi + delta(2),
                               x.theta + delta(3)};
            const Eigen::Matrix<double, 9, 1> rt = residual_vec(trial, word, pert);
            const double trial_cost = rt.squaredNorm();
            if (trial_cost < cost) {
                x = trial;
                r = rt;
                cost = trial_cost;
                lambda = std::max(lambda * 0.25, 1e-14);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break;
    }
    return {x, max_abs(r), max_abs(r) < tol};
}

/// Sphere-side partials of the extended profile with respect to
/// (phi,theta): analytic where the closed forms exist, central
/// differences for tr(Bb) and tr(ABa).
inline Eigen::Matrix<double, 9, 2> sphere_profile_jacobian(const SphereCoord& c,
                                                           const PerturbationConfig& pert) {
    Eigen::Matrix<double, 9, 2> jac;
    const auto put = [&](int row, TraceFn fn) {
        const Partials p = sphere_chart_jacobian(c, pert, fn);
        jac(row, 0) = p.d_phi;
        jac(row, 1) = p.d_theta;
    };
    put(0, TraceFn::TrA);
    put(1, TraceFn::TrB);
    put(2, TraceFn::TrAa);
    put(3, TraceFn::TrBa);
    put(4, TraceFn::TrAb);
    put(6, TraceFn::TrAB);
    put(8, TraceFn::Mu);

    constexpr double fd = 1e-6;
    for (const int row : {5, 7}) {
        const auto entry = [&](double phi, double theta) {
            const RepTuple rho = sphere_rep({phi, theta}, pert);
            return row == 5 ? mul(rho.B, rho.b).trace()
                            : mul(mul(rho.A, rho.B), rho.a).trace();
        };
        jac(row, 0) = (entry(c.phi + fd, c.theta) - entry(c.phi - fd, c.theta)) / (2.0 * fd);
        jac(row, 1) = (entry(c.phi, c.theta + fd) - entry(c.phi, c.theta - fd)) / (2.0 * fd);
    }
    return jac;
}

inline Eigen::Matrix<double, 9, 2> disk_profile_jacobian(const DiskCoord& c,
                                                         const McgWord& word) {
    constexpr double fd = 1e-6;
    Eigen::Matrix<double, 9, 2> jac;
    const auto prof = [&](double chi, double psi) {
        return ext_profile(act(disk_rep({chi, psi}), word));
    };
    const ExtProfile cp = prof(c.chi + fd, c.psi);
    const ExtProfile cm = prof(c.chi - fd, c.psi);
    const ExtProfile pp = prof(c.chi, c.psi + fd);
    const ExtProfile pm = prof(c.chi, c.psi - fd);
    for (int i = 0; i < 9; ++i) {
        jac(i, 0) = (cp[i] - cm[i]) / (2.0 * fd);
        jac(i, 1) = (pp[i] - pm[i]) / (2.0 * fd);
    }
    return jac;
}

}  // namespace detail

/// Conjugation-invariant mismatch between L_d(d).f and L_s(s): the max
/// over the trace profile and mu of the absolute difference.
inline double objective(const DiskCoord& d, const SphereCoord& s,
                        const IntersectionProblem& prob) {
    return detail::ext_distance(detail::ext_profile(act(disk_rep(d), prob.word)),
                                detail::ext_profile(sphere_rep(s, prob.perturbation)));
}

/// Transversality of the intersection at pt, decided by the rank of the
/// combined tangent images in trace coordinates.
inline Transverse transversality(const IntersectionPoint& pt,
                                 const IntersectionProblem& prob) {
    // immersion of the sphere chart fails at the poles (z = +-1)
    if (std::abs(1.0 - std::abs(std::cos(pt.sphere.phi))) < 1e-3)
        return Transverse::Indeterminate;

    Eigen::Matrix<double, 9, 4> m;
    m.block<9, 2>(0, 0) = detail::sphere_profile_jacobian(pt.sphere, prob.perturbation);
    m.block<9, 2>(0, 2) = detail::disk_profile_jacobian(pt.disk, prob.word);
    for (int c = 0; c < 4; ++c) {
        const double n = m.col(c).norm();
        if (n > 1e-10) m.col(c) /= n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double ratio = sv(0) > 0.0 ? sv(3) / sv(0) : 0.0;
    constexpr double threshold = 1e-6;
    if (ratio > 10.0 * threshold) return Transverse::Yes;
    if (ratio < 0.1 * threshold) return Transverse::No;
    return Transverse::Indeterminate;
}

/// The p analytically predicted simple-knot sites
/// (chi,psi) = ((n+1/2) pi/p, (-1)^{n+1}(pi/2 - eps)) with phi = pi/2.
struct PredictedSite {
    DiskCoord disk;
    double expected_phi = kHalfPi;
};

inline std::vector<PredictedSite> simple_knot_predicted_sites(int p, double eps) {
    std::vector<PredictedSite> sites;
    for (int n = 0; n < p; ++n) {
        const double chi = (n + 0.5) * kPi / p;
        const double psi = (n % 2 == 0 ? -1.0 : 1.0) * (kHalfPi - eps);
        sites.push_back({{chi, psi}, kHalfPi});
    }
    return sites;
}

namespace detail {

struct SeedLattice {
    // disk side: n1 x n2 lattice of (chi, psi); sphere side: m1 x m2 of
    // (phi, theta); theta wraps when m2 covers the full circle.
    std::vector<Params> seeds;
};

struct Lattice2D {
    int n1 = 0, n2 = 0;
    bool wrap2 = false;
    std::vector<double> c1, c2;

    int size() const { return n1 * n2; }
};

inline std::vector<std::pair<int, double>> best_match(
    const std::vector<ExtProfile>& from, const std::vector<ExtProfile>& to) {
    std::vector<std::pair<int, double>> best(from.size(), {0, 1e300});
    parallel_for(static_cast<int>(from.size()), [&](int i) {
        const ExtProfile& f = from[i];
        double bv = 1e300;
        int bj = 0;
        for (std::size_t j = 0; j < to.size(); ++j) {
            const ExtProfile& t = to[j];
            // mu mismatch prunes most pairs before the full profile scan
            double d = std::abs(f[8] - t[8]);
            if (d >= bv) continue;
            for (int k = 0; k < 8 && d < bv; ++k)
                d = std::max(d, std::abs(f[k] - t[k]));
            if (d < bv) {
                bv = d;
                bj = static_cast<int>(j);
            }
        }
        best[i] = {bj, bv};
    });
    return best;
}

inline std::vector<int> local_minima(const Lattice2D& lat,
                                     const std::vector<std::pair<int, double>>& best) {
    std::vector<int> mins;
    const auto value = [&](int i, int j) { return best[i * lat.n2 + j].second; };
    for (int i = 0; i < lat.n1; ++i) {
        for (int j = 0; j < lat.n2; ++j) {
            const double v = value(i, j);
            bool is_min = true;
            const auto consider = [&](int ii, int jj) {
                if (ii < 0 || ii >= lat.n1) return;
                if (lat.wrap2) jj = (jj + lat.n2) % lat.n2;
                else if (jj < 0 || jj >= lat.n2) return;
                if (value(ii, jj) < v) is_min = false;
            };
            consider(i - 1, j);
            consider(i + 1, j);
            consider(i, j - 1);
            consider(i, j + 1);
            if (is_min) mins.push_back(i * lat.n2 + j);
        }
    }
    return mins;
}

inline std::vector<double> linspace(double lo, double hi, int n, bool half_open) {
    std::vector<double> v(n);
    const double d = half_open ? (hi - lo) / n : (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + d * i;
    return v;
}

struct ScanPane {
    Lattice2D disk_lat, sphere_lat;
    std::vector<DiskCoord> disk_pts;
    std::vector<SphereCoord> sphere_pts;

    void fill_disk(const std::vector<double>& chis, const std::vector<double>& psis) {
        disk_lat.n1 = static_cast<int>(chis.size());
        disk_lat.n2 = static_cast<int>(psis.size());
        for (double chi : chis)
            for (double psi : psis) disk_pts.push_back({chi, psi});
    }
    void fill_sphere(const std::vector<double>& phis, const std::vector<double>& thetas,
                     bool wrap) {
        sphere_lat.n1 = static_cast<int>(phis.size());
        sphere_lat.n2 = static_cast<int>(thetas.size());
        sphere_lat.wrap2 = wrap;
        for (double phi : phis)
            for (double theta : thetas) sphere_pts.push_back({phi, theta});
    }
};

inline std::vector<Params> collect_seeds(const IntersectionProblem& prob) {
    const int g = prob.effective_grid();
    std::vector<ScanPane> panes;

    switch (prob.family) {
        case KnownFamily::Generic: {
            ScanPane pane;
            pane.fill_disk(linspace(0.0, kPi, g, false),
                           linspace(-kHalfPi, kHalfPi, g, false));
            pane.fill_sphere(linspace(0.0, kPi, g, false),
                             linspace(0.0, kTwoPi, g, true), true);
            panes.push_back(std::move(pane));
            break;
        }
        case KnownFamily::Trefoil:
            // chi = pi/2; intersections at theta in {pi/2, 3pi/2} or poles.
            // The two theta branches are distinct arcs: scan them separately
            // so a minimum on one cannot shadow the other.
            for (const double theta : {kHalfPi, 1.5 * kPi}) {
                ScanPane pane;
                pane.fill_disk({kHalfPi}, linspace(-kHalfPi, kHalfPi, g, false));
                pane.fill_sphere(linspace(0.0, kPi, g, false), {theta}, false);
                panes.push_back(std::move(pane));
            }
            break;
        case KnownFamily::UnknotLens:
            // psi = 0; intersections on the theta in {0,pi} seam
            for (const double theta : {0.0, kPi}) {
                ScanPane pane;
                pane.fill_disk(linspace(0.0, kPi, g, false), {0.0});
                pane.fill_sphere(linspace(0.0, kPi, g, false), {theta}, false);
                panes.push_back(std::move(pane));
            }
            break;
        case KnownFamily::SimpleLens: {
            // Lemma-pinned sites; scan theta only.
            std::vector<Params> seeds;
            const auto sites = simple_knot_predicted_sites(prob.p, prob.perturbation.epsilon);
            const int nt = std::max(g, 256);
            for (const auto& site : sites) {
                const ExtProfile dp =
                    ext_profile(act(disk_rep(site.disk), prob.word));
                double best_v = 1e300;
                double best_theta = 0.0;
                for (int l = 0; l < nt; ++l) {
                    const double theta = kTwoPi * l / nt;
                    const double v = ext_distance(
                        dp, ext_profile(sphere_rep({site.expected_phi, theta},
                                                   prob.perturbation)));
                    if (v < best_v) {
                        best_v = v;
                        best_theta = theta;
                    }
                }
                seeds.push_back({site.disk.chi, site.disk.psi, site.expected_phi,
                                 best_theta});
            }
            return seeds;
        }
    }

    std::vector<std::pair<double, Params>> ranked;
    for (const ScanPane& pane : panes) {
        std::vector<ExtProfile> dprof(pane.disk_pts.size());
        parallel_for(static_cast<int>(pane.disk_pts.size()), [&](int i) {
            dprof[i] = ext_profile(act(disk_rep(pane.disk_pts[i]), prob.word));
        });
        std::vector<ExtProfile> sprof(pane.sphere_pts.size());
        parallel_for(static_cast<int>(pane.sphere_pts.size()), [&](int i) {
            sprof[i] = ext_profile(sphere_rep(pane.sphere_pts[i], prob.perturbation));
        });

        const auto dbest = best_match(dprof, sprof);
        const auto sbest = best_match(sprof, dprof);

        for (int idx : local_minima(pane.disk_lat, dbest)) {
            const auto& [j, v] = dbest[idx];
            ranked.push_back({v,
                              {pane.disk_pts[idx].chi, pane.disk_pts[idx].psi,
                               pane.sphere_pts[j].phi, pane.sphere_pts[j].theta}});
        }
        for (int idx : local_minima(pane.sphere_lat, sbest)) {
            const auto& [j, v] = sbest[idx];
            ranked.push_back({v,
                              {pane.disk_pts[j].chi, pane.disk_pts[j].psi,
                               pane.sphere_pts[idx].phi, pane.sphere_pts[idx].theta}});
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Params> seeds;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (i >= 512) break;
        if (ranked[i].first > 0.5 && i >= 48) break;
        seeds.push_back(ranked[i].second);
    }
    return seeds;
}

}  // namespace detail

/// Find, refine, deduplicate and certify all intersection points of L_s
/// with L_d . f.
inline IntersectionReport solve(const IntersectionProblem& prob) {
    prob.validate();
    if (!monotonicity_check(prob.perturbation)) throw PerturbationTooLarge{};

    IntersectionReport report;
    report.word_text = to_string(prob.word);
    report.epsilon = prob.perturbation.epsilon;
    report.shape = prob.perturbation.shape;
    report.grid = prob.effective_grid();
    report.seed = prob.seed;

    const std::vector<detail::Params> seeds = detail::collect_seeds(prob);

    std::vector<detail::Refined> refined(seeds.size());
    detail::parallel_for(static_cast<int>(seeds.size()), [&](int i) {
        refined[i] = detail::refine(seeds[i], prob.word, prob.perturbation,
                                    prob.newton_tol);
    });

    struct Candidate {
        DiskCoord disk;
        SphereCoord sphere;
        double residual;
        detail::ExtProfile profile;
    };
    std::vector<Candidate> candidates;
    for (const auto& r : refined) {
        if (!r.ok) {
            ++report.dropped_seeds;
            continue;
        }
        const DiskCoord d = detail::canonical_disk(r.x.chi, r.x.psi);
        const SphereCoord s = detail::canonical_sphere(r.x.phi, r.x.theta);
        const detail::ExtProfile dp =
            detail::ext_profile(act(disk_rep(d), prob.word));
        const detail::ExtProfile sp =
            detail::ext_profile(sphere_rep(s, prob.perturbation));
        const double res = detail::ext_distance(dp, sp);
        if (res >= prob.match_tol) {
            ++report.dropped_seeds;
            continue;
        }
        candidates.push_back({d, s, res, sp});
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.residual < b.residual;
                     });

    const double dedup_radius = 10.0 * prob.newton_tol;
    std::vector<Candidate> unique;
    for (const auto& c : candidates) {
        bool dup = false;
        for (const auto& u : unique)
            if (detail::ext_distance(c.profile, u.profile) < dedup_radius) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(c);
    }

    std::stable_sort(unique.begin(), unique.end(), [](const Candidate& a, const Candidate& b) {
        if (a.disk.chi != b.disk.chi) return a.disk.chi < b.disk.chi;
        if (a.disk.psi != b.disk.psi) return a.disk.psi < b.disk.psi;
        if (a.sphere.phi != b.sphere.phi) return a.sphere.phi < b.sphere.phi;
        return a.sphere.theta < b.sphere.theta;
    });

    for (const auto& c : unique) {
        IntersectionPoint pt;
        pt.disk = c.disk;
        pt.sphere = c.sphere;
        pt.chart = sphere_chart(c.sphere, prob.perturbation);
        pt.residual = c.residual;
        pt.near_double_point =
            pt.chart.chart == Chart::P3 && std::abs(pt.chart.alpha - kHalfPi) < 1e-3 &&
            std::abs(pt.chart.beta) < 1e-3 && std::abs(pt.chart.gamma) < 1e-3;
        if (pt.near_double_point) {
            report.double_point_hit = true;
            pt.transverse = Transverse::Indeterminate;
        } else {
            pt.transverse = transversality(pt, prob);
            if (pt.transverse != Transverse::Yes) report.non_transverse_point = true;
        }
        report.points.push_back(pt);
    }
    report.count = static_cast<int>(report.points.size());
    return report;
}

}  // namespace pillowcase
