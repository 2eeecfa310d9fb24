#pragma once

// Polynomial literal parser.
//
// Accepts sums of products of integers, variables with optional ^n, and parenthesized
// subexpressions, e.g. "t^2 + (g+1)*t + 2", "z*x0*x1", "θ^3 + θ + 1". `g` is the generator of
// F_q over F_p. "θ" and "theta" are read as the same variable. Juxtaposition multiplies.

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace goss {

using Monomial = std::map<std::string, int>;

/// Sparse multivariate polynomial over F_q with named variables.
struct SparsePoly {
    const GF* F = nullptr;
    std::map<Monomial, Fq> terms;  // no zero coefficients

    static SparsePoly constant(const GF& F, const Fq& c) {
        SparsePoly p{&F, {}};
        if (!c.is_zero()) p.terms[{}] = c;
        return p;
    }
    static SparsePoly variable(const GF& F, const std::string& v) {
        SparsePoly p{&F, {}};
        p.terms[{{v, 1}}] = Fq(F, 1);
        return p;
    }
    SparsePoly operator+(const SparsePoly& b) const {
        SparsePoly r = *this;
        for (auto& [m, c] : b.terms) r.add_term(m, c);
        return r;
    }
    SparsePoly operator-() const {
        SparsePoly r = *this;
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }
    SparsePoly operator*(const SparsePoly& b) const {
        SparsePoly r{F, {}};
        for (auto& [m1, c1] : terms)
            for (auto& [m2, c2] : b.terms) {
                Monomial m = m1;
                for (auto& [v, e] : m2) m[v] += e;
                r.add_term(m, c1 * c2);
            }
        return r;
    }
    SparsePoly pow(int n) const {
        SparsePoly r = constant(*F, Fq(*F, 1));
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }
    void add_term(const Monomial& m, const Fq& c) {
        auto it = terms.find(m);
        if (it == terms.end()) {
            if (!c.is_zero()) terms.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
    /// Variables that occur.
    std::vector<std::string> variables() const {
        std::map<std::string, bool> seen;
        for (auto& [m, c] : terms)
            for (auto& [v, e] : m) seen[v] = true;
        std::vector<std::string> out;
        for (auto& [v, b] : seen) out.push_back(v);
        return out;
    }
    /// Total degree in the given variables (-1 for zero).
    int degree_in(const std::vector<std::string>& vars) const {
        int d = -1;
        for (auto& [m, c] : terms) {
            int s = 0;
            for (auto& [v, e] : m)
                for (auto& w : vars)
                    if (v == w) s += e;
            d = std::max(d, s);
        }
        return d;
    }
};

namespace detail {

class Parser {
   public:
    Parser(const GF& F, std::string s) : F_(F), s_(normalize(std::move(s))) {}

    SparsePoly parse() {
        if (s_.empty()) throw input_error("empty polynomial literal");
        SparsePoly p = expr();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

   private:
    static std::string normalize(std::string s) {
        std::string out;
        for (size_t i = 0; i < s.size(); ++i) {
            unsigned char c = s[i];
            // θ is U+03B8 (CE B8), τ is U+03C4 (CF 84); − is U+2212 (E2 88 92)
            if (c == 0xCE && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xB8) {
                out += "theta";
                ++i;
            } else if (c == 0xCF && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x84) {
                out += "T";
                ++i;
            } else if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
                       static_cast<unsigned char>(s[i + 2]) == 0x92) {
                out += "-";
                i += 2;
            } else if (!std::isspace(c)) {
                out += static_cast<char>(c);
            }
        }
        return out;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("cannot parse polynomial '" + s_ + "' at position " + std::to_string(pos_) + ": " + msg);
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    SparsePoly expr() {
        SparsePoly acc = SparsePoly::constant(F_, Fq(F_, 0));
        bool first = true;
        while (true) {
            bool neg = false;
            if (peek('+') || peek('-')) {
                neg = s_[pos_] == '-';
                ++pos_;
            } else if (!first) {
                break;
            }
            SparsePoly t = term();
            acc = acc + (neg ? -t : t);
            first = false;
            if (!(peek('+') || peek('-'))) break;
        }
        return acc;
    }
    SparsePoly term() {
        SparsePoly acc = factor();
        while (pos_ < s_.size()) {
            if (peek('*')) {
                ++pos_;
                acc = acc * factor();
            } else if (std::isalnum(static_cast<unsigned char>(s_[pos_])) || peek('(')) {
                acc = acc * factor();
            } else {
                break;
            }
        }
        return acc;
    }
    int exponent() {
        if (!peek('^')) return 1;
        ++pos_;
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected exponent");
        long e = std::stol(s_.substr(start, pos_ - start));
        if (e > 100000) fail("exponent too large");
        return static_cast<int>(e);
    }
    SparsePoly factor() {
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        SparsePoly base;
        if (c == '(') {
            ++pos_;
            base = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string digits = s_.substr(start, pos_ - start);
            long long v = 0;
            for (char d : digits) v = (v * 10 + (d - '0')) % static_cast<long long>(F_.p());
            base = SparsePoly::constant(F_, Fq::from_int(F_, v));
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
                // single-letter names followed directly by other letters are separate factors ("xz"),
                // except for the multi-letter name theta
                if (s_.compare(start, 5, "theta") == 0) {
                    pos_ = start + 5;
                    break;
                }
                if (pos_ - start == 1 && pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) break;
            }
            std::string name = s_.substr(start, pos_ - start);
            if (name == "g") {
                if (F_.e() == 1) fail("generator g used over a prime field");
                base = SparsePoly::constant(F_, Fq(F_, F_.generator()));
            } else {
                base = SparsePoly::variable(F_, name);
            }
        } else {
            fail("unexpected '" + std::string(1, c) + "'");
        }
        int e = exponent();
        return e == 1 ? base : base.pow(e);
    }

    const GF& F_;
    std::string s_;
    size_t pos_ = 0;
};

}  // namespace detail

inline SparsePoly parse_sparse(const GF& F, const std::string& text) { return detail::Parser(F, text).parse(); }

inline std::string canonical_var(const std::string& v) { return v == "theta" ? "θ" : v; }

/// Univariate polynomial; any single variable name is accepted and becomes `var`
/// (pass an empty `var` to keep the name found in the text, default "t").
inline FqPoly parse_poly(const GF& F, const std::string& text, std::string var = "") {
    SparsePoly p = parse_sparse(F, text);
    auto vars = p.variables();
    if (vars.size() > 1) throw input_error("expected a univariate polynomial: '" + text + "'");
    std::string name = var.empty() ? (vars.empty() ? "t" : canonical_var(vars[0])) : var;
    int deg = std::max(0, p.degree_in(vars));
    std::vector<Fq> c(static_cast<size_t>(deg) + 1, Fq(F, 0));
    for (auto& [m, k] : p.terms) c[m.empty() ? 0 : static_cast<size_t>(m.begin()->second)] += k;
    return FqPoly(std::move(c), Fq(F, 0), name);
}

/// Element of F_q from text (integer or g-polynomial).
inline Fq parse_scalar(const GF& F, const std::string& text) {
    SparsePoly p = parse_sparse(F, text);
    if (!p.variables().empty()) throw input_error("expected a scalar: '" + text + "'");
    return p.terms.empty() ? Fq(F, 0) : p.terms.begin()->second;
}

}  // namespace goss
