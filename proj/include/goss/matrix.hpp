#pragma once

// Dense matrices over a commutative ring R (same element concept as Poly).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace goss {

template <class R>
class Matrix {
   public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, const R& zero) : r_(rows), c_(cols), zero_(zero), a_(rows * cols, zero) {}

    static Matrix identity(size_t n, const R& one) {
        Matrix m(n, n, one.zero());
        for (size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<R>>& rows, const R& zero) {
        size_t nr = rows.size(), nc = nr ? rows[0].size() : 0;
        Matrix m(nr, nc, zero);
        for (size_t i = 0; i < nr; ++i) {
            if (rows[i].size() != nc) throw input_error("ragged matrix rows");
            for (size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix column(const std::vector<R>& v, const R& zero) {
        Matrix m(v.size(), 1, zero);
        for (size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    bool is_square() const { return r_ == c_; }
    const R& zero() const { return zero_; }
    R& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const R& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    std::vector<R> col(size_t j) const {
        std::vector<R> v;
        for (size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
        return v;
    }
    void set_col(size_t j, const std::vector<R>& v) {
        for (size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }

    bool is_zero() const {
        for (auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix operator+(const Matrix& b) const {
        check_same(b);
        Matrix m = *this;
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] += b.a_[k];
        return m;
    }
    Matrix operator-(const Matrix& b) const {
        check_same(b);
        Matrix m = *this;
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] -= b.a_[k];
        return m;
    }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    Matrix operator*(const Matrix& b) const {
        if (c_ != b.r_) throw input_error("matrix dimension mismatch in product");
        Matrix m(r_, b.c_, zero_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t k = 0; k < c_; ++k) {
                const R& x = (*this)(i, k);
                if (x.is_zero()) continue;
                for (size_t j = 0; j < b.c_; ++j) {
                    const R& y = b(k, j);
                    if (!y.is_zero()) m(i, j) += x * y;
                }
            }
        return m;
    }
    Matrix operator*(const R& s) const {
        Matrix m = *this;
        for (auto& x : m.a_) x = x * s;
        return m;
    }
    std::vector<R> apply(const std::vector<R>& v) const {
        if (v.size() != c_) throw input_error("vector length mismatch");
        std::vector<R> out(r_, zero_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Matrix transpose() const {
        Matrix m(c_, r_, zero_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    template <class F>
    auto map(F&& f) const {
        using S = decltype(f(zero_));
        Matrix<S> m(r_, c_, f(zero_));
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

    Matrix submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const {
        Matrix m(rows.size(), cols.size(), zero_);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(rows[i], cols[j]);
        return m;
    }
    /// [A | B]
    Matrix hcat(const Matrix& b) const {
        if (r_ != b.r_) throw input_error("row count mismatch in hcat");
        Matrix m(r_, c_ + b.c_, zero_);
        for (size_t i = 0; i < r_; ++i) {
            for (size_t j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
            for (size_t j = 0; j < b.c_; ++j) m(i, c_ + j) = b(i, j);
        }
        return m;
    }

    bool operator==(const Matrix& b) const { return r_ == b.r_ && c_ == b.c_ && a_ == b.a_; }
    bool operator!=(const Matrix& b) const { return !(*this == b); }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < r_; ++i) {
            s += i ? ", [" : "[";
            for (size_t j = 0; j < c_; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
            s += "]";
        }
        return s + "]";
    }

   private:
    void check_same(const Matrix& b) const {
        if (r_ != b.r_ || c_ != b.c_) throw input_error("matrix dimension mismatch");
    }
    size_t r_ = 0, c_ = 0;
    R zero_{};
    std::vector<R> a_;
};

/// Entrywise twist.
template <class R, class F>
Matrix<R> twist(const Matrix<R>& m, F&& sigma) {
    return m.map([&](const R& x) { return sigma(x); });
}

/// Division-free determinant by Laplace expansion along rows, memoised over column subsets
/// (O(n 2^n) ring operations). Valid over any commutative ring.
template <class R>
R det_laplace(const Matrix<R>& m, const R& one) {
    if (!m.is_square()) throw input_error("determinant of a non-square matrix");
    size_t n = m.rows();
    if (n == 0) return one;
    if (n > 24) throw infeasible_error("Laplace determinant limited to size 24");
    // f[S] = det of rows n-|S|.. n-1 against the columns in S
    std::vector<R> f(size_t(1) << n, one.zero());
    f[0] = one;
    for (uint32_t S = 1; S < (uint32_t(1) << n); ++S) {
        int k = __builtin_popcount(S);
        size_t row = n - k;
        R acc = one.zero();
        int pos = 0;
        for (size_t j = 0; j < n; ++j) {
            if (!(S >> j & 1)) continue;
            const R& x = m(row, j);
            if (!x.is_zero()) {
                R term = x * f[S & ~(uint32_t(1) << j)];
                if (pos % 2)
                    acc -= term;
                else
                    acc += term;
            }
            ++pos;
        }
        f[S] = acc;
    }
    return f[(size_t(1) << n) - 1];
}

/// Fraction-free (Bareiss) determinant over a domain with exact division `div(a, b)`.
template <class R, class Div>
R det_bareiss(Matrix<R> m, const R& one, Div&& div) {
    if (!m.is_square()) throw input_error("determinant of a non-square matrix");
    size_t n = m.rows();
    if (n == 0) return one;
    R prev = one;
    bool neg = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return one.zero();
            for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            neg = !neg;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) m(i, j) = div(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
        prev = m(k, k);
    }
    R d = m(n - 1, n - 1);
    return neg ? -d : d;
}

/// Characteristic polynomial det(X*I - M) by Berkowitz's division-free algorithm.
template <class R>
Poly<R> charpoly(const Matrix<R>& m, const R& one, std::string var = "X") {
    if (!m.is_square()) throw input_error("characteristic polynomial of a non-square matrix");
    size_t n = m.rows();
    R zero = one.zero();
    // v holds the coefficients of the charpoly of the leading r x r block, highest degree first.
    std::vector<R> v{one};
    for (size_t r = 0; r < n; ++r) {
        // Toeplitz column: 1, -a, -R*S, -R*A*S, ..., where a = m(r,r), R = row r [0..r), S = column r [0..r)
        std::vector<R> col(r + 2, zero);
        col[0] = one;
        col[1] = -m(r, r);
        std::vector<R> s(r, zero);
        for (size_t i = 0; i < r; ++i) s[i] = m(i, r);
        for (size_t k = 2; k < r + 2; ++k) {
            R acc = zero;
            for (size_t i = 0; i < r; ++i) acc += m(r, i) * s[i];
            col[k] = -acc;
            std::vector<R> ns(r, zero);
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < r; ++j) ns[i] += m(i, j) * s[j];
            s = std::move(ns);
        }
        std::vector<R> nv(r + 2, zero);
        for (size_t i = 0; i < r + 2; ++i)
            for (size_t j = 0; j <= i && j < v.size(); ++j) nv[i] += col[i - j] * v[j];
        v = std::move(nv);
    }
    std::vector<R> low(v.rbegin(), v.rend());
    return Poly<R>(std::move(low), zero, std::move(var));
}

/// Evaluate a polynomial at a square matrix (Cayley-Hamilton checks).
template <class R>
Matrix<R> eval_at_matrix(const Poly<R>& p, const Matrix<R>& m, const R& one) {
    size_t n = m.rows();
    Matrix<R> acc(n, n, one.zero());
    Matrix<R> id = Matrix<R>::identity(n, one);
    for (int i = p.degree(); i >= 0; --i) acc = acc * m + id * p[i];
    return acc;
}

/// Adjugate inverse over a commutative ring; requires det to be a unit (inverted by `unit_inv`).
template <class R, class Inv>
Matrix<R> inverse_adjugate(const Matrix<R>& m, const R& one, Inv&& unit_inv) {
    size_t n = m.rows();
    if (!m.is_square()) throw input_error("inverse of a non-square matrix");
    R d = det_laplace(m, one);
    R dinv = unit_inv(d);
    Matrix<R> out(n, n, one.zero());
    if (n == 0) return out;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<size_t> rs, cs;
            for (size_t k = 0; k < n; ++k) {
                if (k != j) rs.push_back(k);
                if (k != i) cs.push_back(k);
            }
            R c = det_laplace(m.submatrix(rs, cs), one);
            if ((i + j) % 2) c = -c;
            out(i, j) = c * dinv;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Linear algebra over a field K (elements need inv()).

template <class K>
struct Echelon {
    Matrix<K> rref;
    std::vector<size_t> pivots;  // pivot column of each nonzero row
};

template <class K>
Echelon<K> rref(Matrix<K> m) {
    std::vector<size_t> piv;
    size_t row = 0;
    for (size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        size_t p = row;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        K inv = m(row, c).inv();
        for (size_t j = c; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            K f = m(i, c);
            for (size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        piv.push_back(c);
        ++row;
    }
    return {std::move(m), std::move(piv)};
}

template <class K>
size_t rank(const Matrix<K>& m) {
    return rref(m).pivots.size();
}

/// Basis of the right kernel {v : m v = 0}, one vector per free column.
template <class K>
std::vector<std::vector<K>> kernel(const Matrix<K>& m) {
    auto e = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto p : e.pivots) is_piv[p] = true;
    std::vector<std::vector<K>> out;
    K one = m.zero().one();
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<K> v(m.cols(), m.zero());
        v[f] = one;
        for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.rref(r, f);
        out.push_back(std::move(v));
    }
    return out;
}

/// Some solution of m x = b, or nullopt.
template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& m, const std::vector<K>& b) {
    Matrix<K> aug = m.hcat(Matrix<K>::column(b, m.zero()));
    auto e = rref(aug);
    std::vector<K> x(m.cols(), m.zero());
    for (size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == m.cols()) return std::nullopt;
        x[e.pivots[r]] = e.rref(r, m.cols());
    }
    return x;
}

template <class K>
Matrix<K> inverse(const Matrix<K>& m) {
    if (!m.is_square()) throw input_error("inverse of a non-square matrix");
    size_t n = m.rows();
    K one = m.zero().one();
    auto e = rref(m.hcat(Matrix<K>::identity(n, one)));
    if (e.pivots.size() < n || (n && e.pivots[n - 1] != n - 1))
        throw std::domain_error("matrix is singular");
    std::vector<size_t> rs(n), cs(n);
    for (size_t i = 0; i < n; ++i) rs[i] = i, cs[i] = n + i;
    return e.rref.submatrix(rs, cs);
}

template <class K>
K det_field(Matrix<K> m) {
    if (!m.is_square()) throw input_error("determinant of a non-square matrix");
    size_t n = m.rows();
    K one = m.zero().one();
    K d = one;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m(p, c).is_zero()) ++p;
        if (p == n) return m.zero();
        if (p != c) {
            for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d = d * m(c, c);
        K inv = m(c, c).inv();
        for (size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            K f = m(i, c) * inv;
            for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Monic generator of the 0-th Fitting ideal of the finite F_q[t]-module (F_q^n, t acting by m).
inline FqPoly fitting_generator(const Matrix<Fq>& t_action, const GF& F, std::string var = "t") {
    if (!t_action.is_square()) throw input_error("t-action must be square");
    if (t_action.rows() == 0) return FqPoly::constant(Fq(F, 1), var);
    return charpoly(t_action, Fq(F, 1), var);
}

}  // namespace goss
