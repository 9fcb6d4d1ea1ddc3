// Extended-precision scalar and tiny dense-matrix helpers.
//
// The expansion protocol multiplies hyperbolic factors of size e^{t_-} whose
// products cancel down to O(1) results. In double precision the rounded
// cosh/sinh entries cannot satisfy the symplectic identities well enough for
// the closure tolerances (cosh^2 - sinh^2 carries an absolute error of order
// e^{2 t_-} * eps), so schedule-level compositions run on a wider float and
// are rounded only at the end.

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace catlift::detail {

using BigFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>>;

// Durations equal (bit-exactly) to the double rounding of pi/2 denote a
// quarter period; promote them to the full-precision value so the closure
// identities are not polluted by the 6e-17 representation offset, which the
// hyperbolic segments amplify by e^{2 t_-}.
inline BigFloat promote_duration(double t) {
    static const BigFloat half_pi = 2 * atan(BigFloat(1));
    static const double half_pi_double = static_cast<double>(half_pi);
    return t == half_pi_double ? half_pi : BigFloat(t);
}

template <class T>
struct TinyMat {
    std::size_t n = 0;
    std::vector<T> a;

    TinyMat() = default;
    explicit TinyMat(std::size_t dim) : n(dim), a(dim * dim, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static TinyMat identity(std::size_t dim) {
        TinyMat m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = T(1);
        return m;
    }
};

template <class T>
TinyMat<T> operator*(const TinyMat<T>& x, const TinyMat<T>& y) {
    TinyMat<T> z(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const T& v = x(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < x.n; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

template <class T>
TinyMat<T> operator+(const TinyMat<T>& x, const TinyMat<T>& y) {
    TinyMat<T> z(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
    return z;
}

template <class T>
std::vector<T> operator*(const TinyMat<T>& m, const std::vector<T>& v) {
    std::vector<T> out(m.n, T(0));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
    return out;
}

// Gauss-Jordan solve with partial pivoting; dimensions here are at most 4.
template <class T>
std::vector<T> solve(TinyMat<T> m, std::vector<T> b) {
    const std::size_t n = m.n;
    using std::abs;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(m(r, col)) > abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0) throw std::runtime_error("solve: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            std::swap(b[piv], b[col]);
        }
        T inv = T(1) / m(col, col);
        for (std::size_t j = col; j < n; ++j) m(col, j) *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m(r, col) == 0) continue;
            T f = m(r, col);
            for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
            b[r] -= f * b[col];
        }
    }
    return b;
}

template <class T>
T inf_norm(const TinyMat<T>& m) {
    using std::abs;
    T best(0);
    for (std::size_t i = 0; i < m.n; ++i) {
        T row(0);
        for (std::size_t j = 0; j < m.n; ++j) row += abs(m(i, j));
        if (row > best) best = row;
    }
    return best;
}

// Scaling-and-squaring matrix exponential with a Taylor kernel. After the
// scaling step the argument norm is <= 1/4, so the truncation error sits far
// below the working precision for both double and BigFloat scalars.
template <class T>
TinyMat<T> expm(TinyMat<T> m, int taylor_terms = 32) {
    using std::ceil;
    using std::log2;
    double norm = static_cast<double>(inf_norm(m));
    int squarings = 0;
    if (norm > 0.25) {
        squarings = static_cast<int>(ceil(log2(norm / 0.25))) + 1;
        T scale = T(1);
        for (int i = 0; i < squarings; ++i) scale *= T(2);
        for (auto& v : m.a) v /= scale;
    }
    TinyMat<T> result = TinyMat<T>::identity(m.n);
    TinyMat<T> term = TinyMat<T>::identity(m.n);
    for (int k = 1; k <= taylor_terms; ++k) {
        term = term * m;
        for (auto& v : term.a) v /= T(k);
        result = result + term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

}  // namespace catlift::detail
