#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "pillowcase/cohomology.hpp"
#include "pillowcase/lagrangians.hpp"

namespace pillowcase::cohomology {

// ---------------------------------------------------------------------
// Built-in presentations
// ---------------------------------------------------------------------

/// R(S^1 x D^2, A_1): generators {A, a}, no relations, constraint tr(a).
inline ConstrainedPresentation pres_disk() {
    ConstrainedPresentation pres;
    pres.generators = {"A", "a"};
    pres.constraints = {{ConstraintTerm{1.0, 0, BaseKind::Trace, word({{1, 1}})}}};
    return pres;
}

inline Assignment disk_assignment(const DiskCoord& c) {
    const RepTuple rho = disk_rep(c);
    return {rho.A, rho.a};
}

/// R(T^2,2): generators {a, A, B}, no relations, constraints
/// (tr(a), tr([A,B]a)); b is eliminated via b = a^{-1}[A,B]^{-1}.
inline ConstrainedPresentation pres_rt22() {
    ConstrainedPresentation pres;
    pres.generators = {"a", "A", "B"};
    pres.constraints = {
        {ConstraintTerm{1.0, 0, BaseKind::Trace, word({{0, 1}})}},
        {ConstraintTerm{1.0, 0, BaseKind::Trace,
                        word({{1, 1}, {2, 1}, {1, -1}, {2, -1}, {0, 1}})}}};
    return pres;
}

/// R^nat_pi(S^1 x D^2, A_1): generators {a, A, B, h}, relation
/// rho([h,aB]) = -1, constraints
/// (tr a, tr(h a^-1 h^-1), tr h, f_x, f_y, f_z) with
/// f_i = eps*tr(rho(h^-1 A) sigma_i) - tr(rho(B) sigma_i).
inline ConstrainedPresentation pres_rnatpi() {
    ConstrainedPresentation pres;
    pres.generators = {"a", "A", "B", "h"};
    constexpr int a = 0, A = 1, B = 2, h = 3;
    pres.relations = {{word({{h, 1}, {a, 1}, {B, 1}, {h, -1}, {B, -1}, {a, -1}}), -1}};
    pres.constraints.push_back({ConstraintTerm{1.0, 0, BaseKind::Trace, word({{a, 1}})}});
    pres.constraints.push_back(
        {ConstraintTerm{1.0, 0, BaseKind::Trace, word({{h, 1}, {a, -1}, {h, -1}})}});
    pres.constraints.push_back({ConstraintTerm{1.0, 0, BaseKind::Trace, word({{h, 1}})}});
    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        Constraint f;
        f.push_back(ConstraintTerm{1.0, 1, BaseKind::TracePair, word({{h, -1}, {A, 1}}), axis});
        f.push_back(ConstraintTerm{-1.0, 0, BaseKind::TracePair, word({{B, 1}}), axis});
        pres.constraints.push_back(f);
    }
    return pres;
}

/// Basepoint family over L_s for the R^nat_pi presentation; uses the
/// algebraic perturbation shape nu = asin(eps sin phi), under which the
/// constraints hold exactly and the family is analytic through eps = 0.
inline BasepointFamily rnatpi_family(const SphereCoord& c) {
    return [c](double eps) -> Assignment {
        const double nu = std::asin(eps * std::sin(c.phi));
        const RepTuple rho = sphere_rep_nu(c.phi, c.theta, nu);
        return {rho.a, rho.A, rho.B, *rho.h};
    };
}

/// The same family exposed through the generators {a, A, B} of R(T^2,2).
inline BasepointFamily rt22_family(const SphereCoord& c) {
    const BasepointFamily base = rnatpi_family(c);
    return [base](double eps) -> Assignment {
        Assignment full = base(eps);
        return {full[0], full[1], full[2]};
    };
}

/// The Gamma = Z worked example: one generator, constraint families
///   F1 = eps tr, F2 = eps (tr)^2, F3 = eps (tr)^2 + eps^2 tr,
/// all at the basepoint rho(1) = i sigma_z.
inline ConstrainedPresentation pres_z_example(int which) {
    ConstrainedPresentation pres;
    pres.generators = {"g"};
    const Word g = word({{0, 1}});
    switch (which) {
        case 1:
            pres.constraints = {{ConstraintTerm{1.0, 1, BaseKind::Trace, g}}};
            break;
        case 2:
            pres.constraints = {{ConstraintTerm{1.0, 1, BaseKind::TraceSquared, g}}};
            break;
        case 3:
            pres.constraints = {{ConstraintTerm{1.0, 1, BaseKind::TraceSquared, g},
                                 ConstraintTerm{1.0, 2, BaseKind::Trace, g}}};
            break;
        default:
            throw std::invalid_argument("pres_z_example: which must be 1, 2, or 3");
    }
    return pres;
}

inline BasepointFamily z_example_family() {
    return [](double) -> Assignment { return {Su2::pure(kZAxis)}; };
}

// ---------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------
//
// Line-based, '#' starts a comment.  Grammar:
//
//   gens NAME...
//   rel [-] LETTER...              # rho(word) = 1, or -1 with leading '-'
//   con TERM {(+|-) TERM}
//
//   TERM   := {FACTOR *} BASE
//   FACTOR := NUMBER | eps | eps^INT
//   BASE   := tr( LETTER... ) | tr2( LETTER... ) | trp( LETTER... , AXIS )
//   LETTER := NAME | NAME^INT
//   AXIS   := x | y | z
//
// Tokens are separated by whitespace; '(' ')' ',' '*' '+' '-' are
// self-delimiting.

struct PresentationParseError : std::runtime_error {
    int line;
    PresentationParseError(const std::string& what, int line_no)
        : std::runtime_error("presentation parse error on line " +
                             std::to_string(line_no) + ": " + what),
          line(line_no) {}
};

namespace detail {

inline std::vector<std::string> lex_line(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
        } else if (ch == '(' || ch == ')' || ch == ',' || ch == '*' || ch == '+' ||
                   (ch == '-' && (cur.empty() || cur.back() != '^'))) {
            // '-' binds to a preceding '^' as an exponent sign
            if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
            toks.push_back(std::string(1, ch));
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

}  // namespace detail

inline ConstrainedPresentation parse_presentation(const std::string& text) {
    ConstrainedPresentation pres;
    int line_no = 0;
    std::size_t pos = 0;

    const auto gen_index = [&](const std::string& name, int ln) {
        for (std::size_t i = 0; i < pres.generators.size(); ++i)
            if (pres.generators[i] == name) return static_cast<int>(i);
        throw PresentationParseError("unknown generator '" + name + "'", ln);
    };

    const auto parse_letters = [&](const std::vector<std::string>& toks, std::size_t& i,
                                   int ln, const std::string& stop) {
        Word w;
        while (i < toks.size() && toks[i] != stop && toks[i] != ",") {
            std::string tok = toks[i++];
            int exp = 1;
            if (const auto caret = tok.find('^'); caret != std::string::npos) {
                try {
                    exp = std::stoi(tok.substr(caret + 1));
                } catch (...) {
                    throw PresentationParseError("bad exponent in '" + tok + "'", ln);
                }
                tok = tok.substr(0, caret);
            }
            const int g = gen_index(tok, ln);
            const int unit = exp >= 0 ? 1 : -1;
            for (int k = 0; k < std::abs(exp); ++k) w.push_back({g, unit});
        }
        return w;
    };

    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string line =
            text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto toks = detail::lex_line(line);
        if (toks.empty()) continue;

        if (toks[0] == "gens") {
            for (std::size_t i = 1; i < toks.size(); ++i)
                pres.generators.push_back(toks[i]);
        } else if (toks[0] == "rel") {
            std::size_t i = 1;
            int sign = 1;
            if (i < toks.size() && toks[i] == "-") { sign = -1; ++i; }
            Word w = parse_letters(toks, i, line_no, "");
            if (w.empty()) throw PresentationParseError("empty relation word", line_no);
            pres.relations.push_back({w, sign});
        } else if (toks[0] == "con") {
            Constraint con;
            std::size_t i = 1;
            double pending_sign = 1.0;
            while (i < toks.size()) {
                ConstraintTerm term;
                term.coeff = pending_sign;
                // factors
                for (;;) {
                    if (i >= toks.size())
                        throw PresentationParseError("missing constraint base", line_no);
                    const std::string& tok = toks[i];
                    if (tok == "tr" || tok == "tr2" || tok == "trp") break;
                    if (tok == "eps") { term.eps_power += 1; ++i; }
                    else if (tok.rfind("eps^", 0) == 0) {
                        term.eps_power += std::stoi(tok.substr(4));
                        ++i;
                    } else if (tok == "*") { ++i; }
                    else {
                        try { term.coeff *= std::stod(tok); ++i; }
                        catch (...) {
                            throw PresentationParseError("bad factor '" + tok + "'", line_no);
                        }
                    }
                }
                // base
                const std::string base = toks[i++];
                if (i >= toks.size() || toks[i] != "(")
                    throw PresentationParseError("expected '(' after " + base, line_no);
                ++i;
                term.w = parse_letters(toks, i, line_no, ")");
                if (base == "tr") term.kind = BaseKind::Trace;
                else if (base == "tr2") term.kind = BaseKind::TraceSquared;
                else {
                    term.kind = BaseKind::TracePair;
                    if (i >= toks.size() || toks[i] != ",")
                        throw PresentationParseError("trp needs an axis", line_no);
                    ++i;
                    const std::string ax = toks[i++];
                    if (ax == "x") term.axis = Axis::X;
                    else if (ax == "y") term.axis = Axis::Y;
                    else if (ax == "z") term.axis = Axis::Z;
                    else throw PresentationParseError("bad axis '" + ax + "'", line_no);
                }
                if (i >= toks.size() || toks[i] != ")")
                    throw PresentationParseError("expected ')'", line_no);
                ++i;
                con.push_back(term);
                if (i < toks.size()) {
                    if (toks[i] == "+") pending_sign = 1.0;
                    else if (toks[i] == "-") pending_sign = -1.0;
                    else throw PresentationParseError("expected '+' or '-'", line_no);
                    ++i;
                }
            }
            if (con.empty()) throw PresentationParseError("empty constraint", line_no);
            pres.constraints.push_back(con);
        } else {
            throw PresentationParseError("unknown directive '" + toks[0] + "'", line_no);
        }
    }
    return pres;
}

}  // namespace pillowcase::cohomology
