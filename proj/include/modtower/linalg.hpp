#ifndef MODTOWER_LINALG_HPP
#define MODTOWER_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "modtower/poly.hpp"
#include "modtower/rational.hpp"

namespace modtower {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Exact elimination kernel shared by every rank, nullspace and solve call in
/// the library.  S is any exact field scalar (Rational, NFElem, Fp).

template <class S>
struct Echelon {
    Mat<S> reduced;          // reduced row echelon form
    std::vector<int> pivots; // pivot column of each nonzero row
    int rank() const { return static_cast<int>(pivots.size()); }
};

/// Gauss-Jordan reduction with exact zero tests.
template <class S>
Echelon<S> rref(Mat<S> m)
{
    Echelon<S> e;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index p = r;
        while (p < rows && is_zero(m(p, c)))
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            m.row(p).swap(m.row(r));
        const S inv = S(1) / m(r, c);
        for (Eigen::Index j = c; j < cols; ++j)
            m(r, j) = m(r, j) * inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || is_zero(m(i, c)))
                continue;
            const S f = m(i, c);
            for (Eigen::Index j = c; j < cols; ++j)
                m(i, j) = m(i, j) - f * m(r, j);
        }
        e.pivots.push_back(static_cast<int>(c));
        ++r;
    }
    e.reduced = std::move(m);
    return e;
}

/// Fraction-free (Bareiss) rank.  Exact division at every step keeps entries
/// in the ring generated by the input when S is a field of fractions.
template <class S>
int rank(Mat<S> m)
{
    const Eigen::Index rows = m.rows(), cols = m.cols();
    S prev(1);
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index p = r;
        while (p < rows && is_zero(m(p, c)))
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            m.row(p).swap(m.row(r));
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            for (Eigen::Index j = c + 1; j < cols; ++j)
                m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
            m(i, c) = S(0);
        }
        prev = m(r, c);
        ++r;
    }
    return static_cast<int>(r);
}

/// Fraction-free determinant of a square matrix.
template <class S>
S determinant(Mat<S> m)
{
    const Eigen::Index n = m.rows();
    if (n == 0)
        return S(1);
    S prev(1);
    bool negate = false;
    for (Eigen::Index k = 0; k < n - 1; ++k) {
        Eigen::Index p = k;
        while (p < n && is_zero(m(p, k)))
            ++p;
        if (p == n)
            return S(0);
        if (p != k) {
            m.row(p).swap(m.row(k));
            negate = !negate;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j)
                m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return negate ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

/// Basis of {x : m x = 0}, one vector per free column, free entry set to 1.
template <class S>
std::vector<Vec<S>> nullspace(const Mat<S>& m)
{
    const auto e = rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int p : e.pivots)
        is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vec<S>> basis;
    for (Eigen::Index f = 0; f < m.cols(); ++f) {
        if (is_pivot[static_cast<std::size_t>(f)])
            continue;
        Vec<S> v = Vec<S>::Constant(m.cols(), S(0));
        v(f) = S(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v(e.pivots[r]) = -e.reduced(static_cast<Eigen::Index>(r), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m x = b, or nullopt when the system is inconsistent.
template <class S>
std::optional<Vec<S>> solve(const Mat<S>& m, const Vec<S>& b)
{
    Mat<S> aug(m.rows(), m.cols() + 1);
    aug.leftCols(m.cols()) = m;
    aug.col(m.cols()) = b;
    const auto e = rref(aug);
    Vec<S> x = Vec<S>::Constant(m.cols(), S(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == m.cols())
            return std::nullopt;
        x(e.pivots[r]) = e.reduced(static_cast<Eigen::Index>(r), m.cols());
    }
    return x;
}

/// Characteristic polynomial det(X I - m) via Hessenberg reduction.
template <class S>
Poly<S> charpoly(Mat<S> h)
{
    const Eigen::Index n = h.rows();
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
        Eigen::Index p = j + 1;
        while (p < n && is_zero(h(p, j)))
            ++p;
        if (p == n)
            continue;
        if (p != j + 1) {
            h.row(p).swap(h.row(j + 1));
            h.col(p).swap(h.col(j + 1));
        }
        for (Eigen::Index r = j + 2; r < n; ++r) {
            if (is_zero(h(r, j)))
                continue;
            const S u = h(r, j) / h(j + 1, j);
            for (Eigen::Index c = 0; c < n; ++c)
                h(r, c) = h(r, c) - u * h(j + 1, c);
            for (Eigen::Index c = 0; c < n; ++c)
                h(c, j + 1) = h(c, j + 1) + u * h(c, r);
        }
    }
    std::vector<Poly<S>> p(static_cast<std::size_t>(n) + 1);
    p[0] = Poly<S>::constant(S(1));
    for (Eigen::Index m = 1; m <= n; ++m) {
        p[static_cast<std::size_t>(m)] =
            Poly<S>({-h(m - 1, m - 1), S(1)}) * p[static_cast<std::size_t>(m - 1)];
        S t(1);
        for (Eigen::Index i = 1; i < m; ++i) {
            t = t * h(m - i, m - i - 1);
            p[static_cast<std::size_t>(m)] -=
                (t * h(m - i - 1, m - 1)) * p[static_cast<std::size_t>(m - i - 1)];
        }
    }
    return p[static_cast<std::size_t>(n)];
}

} // namespace modtower

namespace Eigen {

template <>
struct NumTraits<modtower::Rational> : GenericNumTraits<modtower::Rational> {
    using Real = modtower::Rational;
    using NonInteger = modtower::Rational;
    using Literal = modtower::Rational;
    using Nested = modtower::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 3
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

} // namespace Eigen

#endif
