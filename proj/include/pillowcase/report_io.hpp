#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pillowcase/intersect.hpp"

namespace pillowcase::io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline const char* shape_name(PerturbationShape s) {
    return s == PerturbationShape::Sine ? "sine" : "algebraic-arcsine";
}

/// The unit vectors a_hat, b_hat of the puncture holonomies at a chart
/// point (P3 uses the pillowcase normal form a = i sigma_x cos gamma +
/// i sigma_z sin gamma, b = a^{-1}).
inline std::pair<Vec3, Vec3> chart_hats(const ChartPoint& pt) {
    if (pt.chart == Chart::P4) return {pt.a_hat, -pt.minus_b_hat};
    const Vec3 ahat{std::cos(pt.gamma), 0.0, std::sin(pt.gamma)};
    return {ahat, -ahat};
}

inline nlohmann::ordered_json report_json(const IntersectionReport& report,
                                          const std::string& family_name) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["word"] = report.word_text;
    j["family"] = family_name;
    j["epsilon"] = report.epsilon;
    j["shape"] = shape_name(report.shape);
    j["grid"] = report.grid;
    j["seed"] = report.seed;
    j["count"] = report.count;
    j["flags"] = {{"double_point_hit", report.double_point_hit},
                  {"non_transverse_point", report.non_transverse_point}};
    j["dropped_seeds"] = report.dropped_seeds;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& pt : report.points) {
        nlohmann::ordered_json p;
        p["chart"] = pt.chart.chart == Chart::P3 ? "P3" : "P4";
        if (pt.chart.chart == Chart::P3) {
            p["alpha"] = pt.chart.alpha;
            p["beta"] = pt.chart.beta;
            p["gamma"] = pt.chart.gamma;
        }
        const auto [ahat, bhat] = chart_hats(pt.chart);
        p["ahat"] = {ahat.x, ahat.y, ahat.z};
        p["bhat"] = {bhat.x, bhat.y, bhat.z};
        p["chi"] = pt.disk.chi;
        p["psi"] = pt.disk.psi;
        p["phi"] = pt.sphere.phi;
        p["theta"] = pt.sphere.theta;
        p["residual"] = pt.residual;
        p["transverse"] = to_string(pt.transverse);
        p["near_double_point"] = pt.near_double_point;
        j["points"].push_back(p);
    }
    return j;
}

inline std::string points_csv(const IntersectionReport& report) {
    std::string out =
        "chart,alpha,beta,gamma,ahat_x,ahat_y,ahat_z,bhat_x,bhat_y,bhat_z,"
        "chi,psi,phi,theta,residual,transverse\n";
    for (const auto& pt : report.points) {
        const bool p3 = pt.chart.chart == Chart::P3;
        const auto [ahat, bhat] = chart_hats(pt.chart);
        out += p3 ? "P3" : "P4";
        out += ',';
        out += p3 ? fmt(pt.chart.alpha) : "";
        out += ',';
        out += p3 ? fmt(pt.chart.beta) : "";
        out += ',';
        out += p3 ? fmt(pt.chart.gamma) : "";
        for (const double v : {ahat.x, ahat.y, ahat.z, bhat.x, bhat.y, bhat.z})
            out += ',' + fmt(v);
        for (const double v : {pt.disk.chi, pt.disk.psi, pt.sphere.phi,
                               pt.sphere.theta, pt.residual})
            out += ',' + fmt(v);
        out += ',';
        out += to_string(pt.transverse);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------
// SVG figures
// ---------------------------------------------------------------------

class SvgCanvas {
public:
    SvgCanvas(double width, double height, double x0, double x1, double y0, double y1)
        : width_(width), height_(height), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
                 "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) +
                 " " + fmt(height_) + "\">\n";
        body_ += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" +
                 fmt(width_ - 2 * kMargin) + "\" height=\"" + fmt(height_ - 2 * kMargin) +
                 "\" fill=\"white\" stroke=\"black\"/>\n";
    }

    void comment(const std::string& text) { body_ += "<!-- " + text + " -->\n"; }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke = 1.5,
                  const std::string& dash = "") {
        if (pts.size() < 2) return;
        std::string d = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                        fmt(stroke) + "\"";
        if (!dash.empty()) d += " stroke-dasharray=\"" + dash + "\"";
        d += " points=\"";
        for (const auto& [x, y] : pts) d += fmt(px(x)) + "," + fmt(py(y)) + " ";
        d += "\"/>\n";
        body_ += d;
    }

    /// Polyline split wherever consecutive points jump more than half the
    /// coordinate range (for curves drawn modulo 2 pi).
    void wrapped_polyline(const std::vector<std::pair<double, double>>& pts,
                          const std::string& color, double stroke = 1.5) {
        std::vector<std::pair<double, double>> segment;
        for (const auto& p : pts) {
            if (!segment.empty() &&
                (std::abs(p.first - segment.back().first) > 0.5 * (x1_ - x0_) ||
                 std::abs(p.second - segment.back().second) > 0.5 * (y1_ - y0_))) {
                polyline(segment, color, stroke);
                segment.clear();
            }
            segment.push_back(p);
        }
        polyline(segment, color, stroke);
    }

    void circle(double x, double y, double r, const std::string& color) {
        body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" +
                 fmt(r) + "\" fill=\"" + color + "\"/>\n";
    }

    void dot(double x, double y, const std::string& color) { circle(x, y, 1.2, color); }

    void text(double x, double y, const std::string& s, double dx = 6.0, double dy = -6.0) {
        body_ += "<text x=\"" + fmt(px(x) + dx) + "\" y=\"" + fmt(py(y) + dy) +
                 "\" font-size=\"11\" font-family=\"sans-serif\">" + s + "</text>\n";
    }

    void label_axes(const std::string& xlabel, const std::string& ylabel) {
        body_ += "<text x=\"" + fmt(width_ / 2.0) + "\" y=\"" + fmt(height_ - 6.0) +
                 "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
                 xlabel + "</text>\n";
        body_ += "<text x=\"14\" y=\"" + fmt(height_ / 2.0) +
                 "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 14 " +
                 fmt(height_ / 2.0) + ")\">" + ylabel + "</text>\n";
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    static constexpr double kMargin = 34.0;

    double px(double x) const {
        return kMargin + (x - x0_) / (x1_ - x0_) * (width_ - 2 * kMargin);
    }
    double py(double y) const {
        return height_ - kMargin - (y - y0_) / (y1_ - y0_) * (height_ - 2 * kMargin);
    }

    double width_, height_, x0_, x1_, y0_, y1_;
    std::string body_;
};

inline double planar_angle(const Vec3& v) { return wrap_angle(std::atan2(v.y, v.x)); }

/// Pillowcase rectangle [0,2pi] x [0,pi] showing the L_s arcs, the P3
/// trace of L_d . f (sampled dots), and the P3 intersection points.
inline std::string pillowcase_svg(const IntersectionReport& report, const McgWord& word,
                                  const PerturbationConfig& pert,
                                  const std::string& stamp) {
    SvgCanvas svg(560, 320, 0.0, kTwoPi, 0.0, kPi);
    if (!stamp.empty()) svg.comment(stamp);
    svg.label_axes("alpha", "beta");

    // sphere Lagrangian seam arcs (theta = 0 and pi)
    for (const double theta : {0.0, kPi}) {
        std::vector<std::pair<double, double>> arc;
        for (int i = 0; i <= 400; ++i) {
            const double phi = kPi * i / 400.0;
            const ChartPoint pt = sphere_chart({phi, theta}, pert);
            arc.push_back({pt.alpha, pt.beta});
        }
        svg.wrapped_polyline(arc, "#1f77b4");
    }

    // P3 trace of the moved disk Lagrangian, sampled
    for (int i = 0; i <= 160; ++i) {
        for (int j = 0; j <= 80; ++j) {
            const DiskCoord c{kPi * i / 160.0, -kHalfPi + kPi * j / 80.0};
            const RepTuple moved = act(disk_rep(c), word);
            if (classify(moved) != Chart::P3) continue;
            const ChartPoint pt = to_chart_p3(moved);
            svg.dot(pt.alpha, pt.beta, "#ff7f0e");
        }
    }

    for (const auto& pt : report.points) {
        if (pt.chart.chart != Chart::P3) continue;
        svg.circle(pt.chart.alpha, pt.chart.beta, 5.0, pt.near_double_point ? "red" : "black");
        svg.text(pt.chart.alpha, pt.chart.beta, "gamma=" + fmt(pt.chart.gamma));
    }
    return svg.finish();
}

/// Torus square in (angle(a_hat), angle(-b_hat)) with the diagonal, the
/// torus trace of L_s, sampled dots of L_d . f, and the P4 points.
inline std::string torus_svg(const IntersectionReport& report, const McgWord& word,
                             const PerturbationConfig& pert, const std::string& stamp) {
    SvgCanvas svg(420, 420, 0.0, kTwoPi, 0.0, kTwoPi);
    if (!stamp.empty()) svg.comment(stamp);
    svg.label_axes("angle(a_hat)", "angle(-b_hat)");

    svg.polyline({{0.0, 0.0}, {kTwoPi, kTwoPi}}, "#999999", 1.0, "5,4");

    // L_s meets the torus along theta = pi/2 and 3pi/2
    for (const double theta : {kHalfPi, 1.5 * kPi}) {
        std::vector<std::pair<double, double>> curve;
        for (int i = 0; i <= 400; ++i) {
            const double phi = kPi * i / 400.0;
            const ChartPoint pt = sphere_chart({phi, theta}, pert);
            if (pt.chart != Chart::P4) continue;
            curve.push_back({planar_angle(pt.a_hat), planar_angle(pt.minus_b_hat)});
        }
        svg.wrapped_polyline(curve, "#1f77b4");
    }

    // sampled torus trace of the moved disk Lagrangian
    for (int i = 0; i <= 160; ++i) {
        for (int j = 0; j <= 160; ++j) {
            const DiskCoord c{kPi * i / 160.0, -kHalfPi + kPi * j / 160.0};
            const RepTuple moved = act(disk_rep(c), word);
            if (classify(moved) != Chart::P4) continue;
            const ChartPoint pt = to_chart_p4(moved);
            if (std::abs(pt.a_hat.z) > 1e-9 || std::abs(pt.minus_b_hat.z) > 1e-9)
                continue;
            svg.dot(planar_angle(pt.a_hat), planar_angle(pt.minus_b_hat), "#ff7f0e");
        }
    }

    for (const auto& pt : report.points) {
        if (pt.chart.chart != Chart::P4) continue;
        svg.circle(planar_angle(pt.chart.a_hat), planar_angle(pt.chart.minus_b_hat), 5.0,
                   "black");
    }
    return svg.finish();
}

/// CSV of the sampled Lagrangian curves in the pillowcase.
inline std::string lagrangians_csv(const PerturbationConfig& pert, int samples = 400) {
    std::string out = "curve,param,alpha,beta\n";
    for (const double theta : {0.0, kPi}) {
        const std::string name = theta == 0.0 ? "Ls_theta0" : "Ls_thetapi";
        for (int i = 0; i <= samples; ++i) {
            const double phi = kPi * i / samples;
            const ChartPoint pt = sphere_chart({phi, theta}, pert);
            out += name + ',' + fmt(phi) + ',' + fmt(pt.alpha) + ',' + fmt(pt.beta) + '\n';
        }
    }
    for (int i = 0; i <= samples; ++i) {
        const double chi = kPi * i / samples;
        out += "Ld," + fmt(chi) + ',' + fmt(chi) + ",0\n";
    }
    return out;
}

inline std::string lagrangians_svg(const PerturbationConfig& pert,
                                   const std::string& stamp) {
    SvgCanvas svg(560, 320, 0.0, kTwoPi, 0.0, kPi);
    if (!stamp.empty()) svg.comment(stamp);
    if (pert.epsilon < 1e-12)
        svg.comment("degenerate: eps = 0 collapses the arcs onto beta = 0");
    svg.label_axes("alpha", "beta");

    for (const double theta : {0.0, kPi}) {
        std::vector<std::pair<double, double>> arc;
        for (int i = 0; i <= 400; ++i) {
            const double phi = kPi * i / 400.0;
            const ChartPoint pt = sphere_chart({phi, theta}, pert);
            arc.push_back({pt.alpha, pt.beta});
        }
        svg.wrapped_polyline(arc, "#1f77b4");
    }
    svg.polyline({{0.0, 0.0}, {kPi, 0.0}}, "#ff7f0e", 2.5);
    svg.circle(kHalfPi, 0.0, 4.0, "red");
    svg.text(kHalfPi, 0.0, "double point");
    return svg.finish();
}

}  // namespace pillowcase::io
