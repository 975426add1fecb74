#pragma once

#include <cctype>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pillowcase/char_variety.hpp"
#include "pillowcase/su2.hpp"

namespace pillowcase {

/// Generators of MCG_2(T^2) together with the braid letters of B_2(T^2)
/// (acting through the push map) and the sugar letter S = Ta Tb^-1 Ta.
enum class McgGen { Ta, Tb, TA, TB, Omega, Alpha1, Beta1, Alpha2, Beta2, Sigma, S };

struct McgLetter {
    McgGen gen;
    int exponent = 1;
};

/// A word acting on the right: letters apply first-to-last, so that
/// rho . (f g) = (rho . f) . g.
using McgWord = std::vector<McgLetter>;

inline McgWord inverse_word(const McgWord& w) {
    McgWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->gen, -it->exponent});
    return out;
}

inline McgWord concat(const McgWord& u, const McgWord& v) {
    McgWord out = u;
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

namespace detail {

/// One application of a generator (exponent +1) to (A,B,a,b).
inline RepTuple act_gen(const RepTuple& r, McgGen g) {
    const Su2 &A = r.A, &B = r.B, &a = r.a, &b = r.b;
    RepTuple o;
    o.A = A; o.B = B; o.a = a; o.b = b;
    switch (g) {
        case McgGen::Ta:
            o.B = mul(B, A);
            break;
        case McgGen::Tb:
            o.A = mul(A, B);
            break;
        case McgGen::TA:
            o.B = mul(a, mul(A, B));
            o.b = mul(mul(A, a), mul(b, mul(a.inverse(), A.inverse())));
            break;
        case McgGen::TB:
            o.A = mul(a.inverse(), mul(B, A));
            o.b = mul(mul(a.inverse(), B), mul(b, mul(B.inverse(), a)));
            break;
        case McgGen::Omega:
            o.A = A.inverse();
            o.B = B.inverse();
            o.a = mul(mul(B.inverse(), A.inverse()), mul(b, mul(A, B)));
            o.b = mul(mul(A.inverse(), B.inverse()), mul(a, mul(B, A)));
            break;
        case McgGen::Alpha1:
            o.B = mul(a.inverse(), B);
            o.a = mul(A, mul(a, A.inverse()));
            o.b = mul(mul(A, a.inverse()), mul(A.inverse(), mul(b, mul(A, mul(a, A.inverse())))));
            break;
        case McgGen::Beta1:
            o.A = mul(a, A);
            o.a = mul(B, mul(a, B.inverse()));
            o.b = mul(a, mul(b, a.inverse()));
            break;
        case McgGen::Alpha2:
            o.B = mul(mul(a, b.inverse()), mul(a.inverse(), B));
            o.b = mul(mul(A, a), mul(b, mul(a.inverse(), A.inverse())));
            break;
        case McgGen::Beta2:
            o.A = mul(b, A);
            o.b = mul(mul(a.inverse(), B), mul(b, mul(B.inverse(), a)));
            break;
        case McgGen::Sigma:
            o.a = b;
            o.b = mul(b.inverse(), mul(a, b));
            break;
        case McgGen::S:
            break;  // expanded by act()
    }
    return o;
}

/// One application of a generator inverse: the inverse substitution of
/// the table above.
inline RepTuple act_gen_inv(const RepTuple& r, McgGen g) {
    const Su2 &A = r.A, &B = r.B, &a = r.a, &b = r.b;
    RepTuple o;
    o.A = A; o.B = B; o.a = a; o.b = b;
    switch (g) {
        case McgGen::Ta:
            o.B = mul(B, A.inverse());
            break;
        case McgGen::Tb:
            o.A = mul(A, B.inverse());
            break;
        case McgGen::TA:
            o.B = mul(A.inverse(), mul(a.inverse(), B));
            o.b = mul(mul(a.inverse(), A.inverse()), mul(b, mul(A, a)));
            break;
        case McgGen::TB:
            o.A = mul(B.inverse(), mul(a, A));
            o.b = mul(mul(B.inverse(), a), mul(b, mul(a.inverse(), B)));
            break;
        case McgGen::Omega:
            return act_gen(r, McgGen::Omega);  // omega is an involution
        case McgGen::Alpha1:
            o.B = mul(mul(A.inverse(), a), mul(A, B));
            o.a = mul(A.inverse(), mul(a, A));
            o.b = mul(a, mul(b, a.inverse()));
            break;
        case McgGen::Beta1:
            o.A = mul(mul(B.inverse(), a.inverse()), mul(B, A));
            o.a = mul(B.inverse(), mul(a, B));
            o.b = mul(mul(B.inverse(), a.inverse()), mul(B, mul(b, mul(B.inverse(), mul(a, B)))));
            break;
        case McgGen::Alpha2:
            o.B = mul(mul(A.inverse(), b), mul(A, B));
            o.b = mul(mul(a.inverse(), A.inverse()), mul(b, mul(A, a)));
            break;
        case McgGen::Beta2:
            o.A = mul(mul(B.inverse(), a), mul(b.inverse(), mul(a.inverse(), mul(B, A))));
            o.b = mul(mul(B.inverse(), a), mul(b, mul(a.inverse(), B)));
            break;
        case McgGen::Sigma:
            o.a = mul(a, mul(b, a.inverse()));
            o.b = a;
            break;
        case McgGen::S:
            break;  // expanded by act()
    }
    return o;
}

}  // namespace detail

/// Right action of a word on a representation tuple.  The h,w fields of
/// the input are dropped (the action lives on R(T^2,2)).
inline RepTuple act(const RepTuple& rho, const McgWord& word) {
    RepTuple r;
    r.A = rho.A; r.B = rho.B; r.a = rho.a; r.b = rho.b;
    for (const McgLetter& letter : word) {
        if (letter.gen == McgGen::S) {
            // s = Ta Tb^-1 Ta
            const McgWord s_word{{McgGen::Ta, 1}, {McgGen::Tb, -1}, {McgGen::Ta, 1}};
            const McgWord w = letter.exponent >= 0 ? s_word : inverse_word(s_word);
            const int reps = std::abs(letter.exponent);
            for (int i = 0; i < reps; ++i) r = act(r, w);
            continue;
        }
        const int reps = std::abs(letter.exponent);
        for (int i = 0; i < reps; ++i)
            r = letter.exponent >= 0 ? detail::act_gen(r, letter.gen)
                                     : detail::act_gen_inv(r, letter.gen);
    }
    return r;
}

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error("word parse error at position " + std::to_string(pos) +
                             ": " + what),
          position(pos) {}
};

/// Parse a whitespace-separated word over the alphabet
/// {Ta, Tb, TA, TB, w, s, a1, b1, a2, b2, sg}, each letter optionally
/// followed by ^n or ^-n.  Text order is application order.
inline McgWord parse_word(const std::string& text) {
    McgWord word;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        const std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string tok = text.substr(start, i - start);

        int exponent = 1;
        if (const auto caret = tok.find('^'); caret != std::string::npos) {
            const std::string exp_str = tok.substr(caret + 1);
            tok = tok.substr(0, caret);
            if (exp_str.empty()) throw ParseError("missing exponent after '^'", start + caret);
            char* end = nullptr;
            const long v = std::strtol(exp_str.c_str(), &end, 10);
            if (end == nullptr || *end != '\0')
                throw ParseError("bad exponent '" + exp_str + "'", start + caret + 1);
            exponent = static_cast<int>(v);
        }

        McgGen gen;
        if (tok == "Ta") gen = McgGen::Ta;
        else if (tok == "Tb") gen = McgGen::Tb;
        else if (tok == "TA") gen = McgGen::TA;
        else if (tok == "TB") gen = McgGen::TB;
        else if (tok == "w") gen = McgGen::Omega;
        else if (tok == "s") gen = McgGen::S;
        else if (tok == "a1") gen = McgGen::Alpha1;
        else if (tok == "b1") gen = McgGen::Beta1;
        else if (tok == "a2") gen = McgGen::Alpha2;
        else if (tok == "b2") gen = McgGen::Beta2;
        else if (tok == "sg") gen = McgGen::Sigma;
        else throw ParseError("unknown generator '" + tok + "'", start);

        word.push_back({gen, exponent});
    }
    return word;
}

inline std::string to_string(const McgWord& word) {
    static const char* names[] = {"Ta", "Tb", "TA", "TB", "w",
                                  "a1", "b1", "a2", "b2", "sg", "s"};
    const auto name = [&](McgGen g) {
        switch (g) {
            case McgGen::Ta: return names[0];
            case McgGen::Tb: return names[1];
            case McgGen::TA: return names[2];
            case McgGen::TB: return names[3];
            case McgGen::Omega: return names[4];
            case McgGen::Alpha1: return names[5];
            case McgGen::Beta1: return names[6];
            case McgGen::Alpha2: return names[7];
            case McgGen::Beta2: return names[8];
            case McgGen::Sigma: return names[9];
            case McgGen::S: return names[10];
        }
        return "?";
    };
    std::string out;
    for (const auto& letter : word) {
        if (!out.empty()) out += ' ';
        out += name(letter.gen);
        if (letter.exponent != 1) out += "^" + std::to_string(letter.exponent);
    }
    return out;
}

struct RelationCheck {
    std::string name;
    double max_residual = 0.0;
};

struct RelationReport {
    std::vector<RelationCheck> checks;
    double max_residual() const {
        double m = 0.0;
        for (const auto& c : checks) m = std::max(m, c.max_residual);
        return m;
    }
    bool all_below(double tol) const { return max_residual() < tol; }
};

struct RelationViolation : std::runtime_error {
    explicit RelationViolation(const RelationCheck& check)
        : std::runtime_error("relation '" + check.name + "' violated, residual " +
                             std::to_string(check.max_residual)) {}
};

namespace detail {

template <class Rng>
RelationCheck check_pair(const std::string& name, const McgWord& lhs, const McgWord& rhs,
                         int samples, Rng& rng) {
    RelationCheck check{name, 0.0};
    for (int i = 0; i < samples; ++i) {
        const RepTuple rho = random_rep_tuple(rng);
        check.max_residual =
            std::max(check.max_residual, rep_distance(act(rho, lhs), act(rho, rhs)));
    }
    return check;
}

inline McgWord repeated(const McgWord& w, int times) {
    McgWord out;
    for (int i = 0; i < times; ++i) out = concat(out, w);
    return out;
}

}  // namespace detail

/// Check the defining relations of PMCG_2(T^2), omega^2 = 1, and the six
/// B_2(T^2) relations as actions on random tuples.
template <class Rng>
RelationReport verify_relations(int samples, Rng& rng) {
    using G = McgGen;
    const McgWord ta{{G::Ta, 1}}, tb{{G::Tb, 1}}, tA{{G::TA, 1}}, tB{{G::TB, 1}};
    const McgWord om{{G::Omega, 1}};
    const McgWord a1{{G::Alpha1, 1}}, b1{{G::Beta1, 1}}, a2{{G::Alpha2, 1}},
        b2{{G::Beta2, 1}}, sg{{G::Sigma, 1}};

    RelationReport report;
    auto check = [&](const std::string& name, const McgWord& lhs, const McgWord& rhs) {
        report.checks.push_back(detail::check_pair(name, lhs, rhs, samples, rng));
    };

    check("Ta Tb^-1 Ta = Tb^-1 Ta Tb^-1",
          parse_word("Ta Tb^-1 Ta"), parse_word("Tb^-1 Ta Tb^-1"));
    check("TA Tb^-1 TA = Tb^-1 TA Tb^-1",
          parse_word("TA Tb^-1 TA"), parse_word("Tb^-1 TA Tb^-1"));
    check("Ta TA = TA Ta", parse_word("Ta TA"), parse_word("TA Ta"));
    check("(Tb^-1 Ta TA)^4 = 1",
          detail::repeated(parse_word("Tb^-1 Ta TA"), 4), McgWord{});
    check("TB = Ta TA^-1 Tb TA Ta^-1", tB, parse_word("Ta TA^-1 Tb TA Ta^-1"));
    check("w^2 = 1", concat(om, om), McgWord{});
    check("a2 = sg^-1 a1 sg^-1", a2, parse_word("sg^-1 a1 sg^-1"));
    check("b2 = sg b1 sg", b2, parse_word("sg b1 sg"));
    check("a1 a2 = a2 a1", concat(a1, a2), concat(a2, a1));
    check("b1 b2 = b2 b1", concat(b1, b2), concat(b2, b1));
    check("b1^-1 a1^-1 b1 a1 = sg^2", parse_word("b1^-1 a1^-1 b1 a1"),
          parse_word("sg^2"));
    check("b1^-1 a2 b1 a2^-1 = sg^2", parse_word("b1^-1 a2 b1 a2^-1"),
          parse_word("sg^2"));
    return report;
}

/// Check the Birman push map delta against the direct braid formulas,
/// plus the commuting pi_1(Homeo_0) image.
template <class Rng>
RelationReport birman_checks(int samples, Rng& rng) {
    RelationReport report;
    auto check = [&](const std::string& name, const McgWord& lhs, const McgWord& rhs) {
        report.checks.push_back(detail::check_pair(name, lhs, rhs, samples, rng));
    };

    check("delta(a1) = Ta TA^-1", parse_word("a1"), parse_word("Ta TA^-1"));
    check("delta(a2) = TA Ta^-1", parse_word("a2"), parse_word("TA Ta^-1"));
    check("delta(b1) = Tb TB^-1", parse_word("b1"), parse_word("Tb TB^-1"));
    check("delta(b2) = TB Tb^-1", parse_word("b2"), parse_word("TB Tb^-1"));
    check("delta(sg) = s^2 w", parse_word("sg"), parse_word("s^2 w"));
    check("delta(sg)^2 = delta(sg^2)", parse_word("s^2 w s^2 w"), parse_word("sg^2"));
    check("(a1 a2)(b1 b2) = (b1 b2)(a1 a2)", parse_word("a1 a2 b1 b2"),
          parse_word("b1 b2 a1 a2"));
    return report;
}

template <class Rng>
void require_relations(int samples, Rng& rng, double tol = 1e-9) {
    for (const auto& report : {verify_relations(samples, rng), birman_checks(samples, rng)})
        for (const auto& check : report.checks)
            if (check.max_residual >= tol) throw RelationViolation(check);
}

}  // namespace pillowcase
