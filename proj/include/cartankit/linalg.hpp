#pragma once

/**
 * \file linalg.hpp
 * \brief Small dense real matrices: norms, singular values, exterior
 * square, matrix exponential and a few subspace helpers.
 *
 * Everything is templated on the scalar so the same code runs in double
 * and in extended precision (see group.hpp for the guarded path).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cartankit {

using vec = std::vector<double>;

template <class T>
inline T abs_of(T x) {
    return x < T(0) ? -x : x;
}

/** \brief Row-major dense matrix. */
template <class T>
class basic_mat {
public:
    basic_mat() = default;
    basic_mat(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    basic_mat(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw shape_error("ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static basic_mat identity(std::size_t n) {
        basic_mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static basic_mat diagonal(const std::vector<T>& d) {
        basic_mat m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    basic_mat transpose() const {
        basic_mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    basic_mat& operator+=(const basic_mat& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    basic_mat& operator-=(const basic_mat& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    basic_mat& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

private:
    void check_same(const basic_mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix size mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using mat = basic_mat<double>;

template <class T>
basic_mat<T> operator+(basic_mat<T> a, const basic_mat<T>& b) {
    a += b;
    return a;
}
template <class T>
basic_mat<T> operator-(basic_mat<T> a, const basic_mat<T>& b) {
    a -= b;
    return a;
}
template <class T>
basic_mat<T> operator-(basic_mat<T> a) {
    a *= T(-1);
    return a;
}
template <class T>
basic_mat<T> operator*(basic_mat<T> a, T s) {
    a *= s;
    return a;
}
template <class T>
basic_mat<T> operator*(T s, basic_mat<T> a) {
    a *= s;
    return a;
}

/** \brief Matrix product; zero entries of the left factor are skipped. */
template <class T>
basic_mat<T> operator*(const basic_mat<T>& a, const basic_mat<T>& b) {
    if (a.cols() != b.rows()) throw shape_error("product size mismatch");
    basic_mat<T> c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T* crow = &c.data()[i * n];
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T(0)) continue;
            const T* brow = &b.data()[k * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

template <class T>
vec operator*(const basic_mat<T>& a, const vec& x) {
    if (a.cols() != x.size()) throw shape_error("matrix-vector size mismatch");
    vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += static_cast<double>(a(i, j)) * x[j];
    return y;
}

template <class U, class T>
basic_mat<U> convert(const basic_mat<T>& m) {
    basic_mat<U> r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); ++k) r.data()[k] = static_cast<U>(m.data()[k]);
    return r;
}

template <class T>
bool all_finite(const basic_mat<T>& m) {
    for (const auto& v : m.data()) {
        const double d = static_cast<double>(v);
        if (!std::isfinite(d)) return false;
    }
    return true;
}

/** \brief Largest absolute entry. */
template <class T>
T max_abs_norm(const basic_mat<T>& m) {
    T best = T(0);
    for (const auto& v : m.data()) best = std::max(best, abs_of(v));
    return best;
}

template <class T>
double norm1(const basic_mat<T>& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::fabs(static_cast<double>(m(i, j)));
        best = std::max(best, s);
    }
    return best;
}

// ---------------------------------------------------------------------------
// exterior square

/** \brief A pair i < j of basis indices and its lexicographic position. */
struct wedge_index {
    std::size_t d = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t flat = 0;
};

inline std::size_t wedge_dim(std::size_t d) { return d * (d - 1) / 2; }

/** \brief Flat index of the pair (i, j), 0-based, i < j. */
inline std::size_t wedge_flat(std::size_t d, std::size_t i, std::size_t j) {
    if (!(i < j && j < d)) throw shape_error("wedge pair out of range");
    return i * d - i * (i + 1) / 2 + (j - i - 1);
}

inline wedge_index wedge_pair(std::size_t d, std::size_t flat) {
    if (flat >= wedge_dim(d)) throw shape_error("wedge index out of range");
    std::size_t i = 0;
    std::size_t start = 0;
    while (start + (d - i - 1) <= flat) {
        start += d - i - 1;
        ++i;
    }
    return {d, i, i + 1 + (flat - start), flat};
}

/** \brief Matrix of g ^ g on the lexicographic basis e_i ^ e_j (i < j). */
template <class T>
basic_mat<T> wedge_square(const basic_mat<T>& m) {
    if (!m.square() || m.rows() < 2) throw shape_error("wedge_square needs a square matrix, d >= 2");
    const std::size_t d = m.rows();
    const std::size_t w = wedge_dim(d);
    basic_mat<T> r(w, w);
    std::size_t a = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j, ++a) {
            std::size_t b = 0;
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = k + 1; l < d; ++l, ++b)
                    r(a, b) = m(i, k) * m(j, l) - m(i, l) * m(j, k);
        }
    return r;
}

// ---------------------------------------------------------------------------
// singular values and symmetric eigenproblems

struct svd_result {
    vec s;  ///< descending singular values
    mat u;  ///< left vectors, rows x cols (columns paired with s)
    mat v;  ///< right vectors, cols x cols
};

/**
 * \brief One-sided Jacobi SVD.
 *
 * Rotations orthogonalise the columns of m, i.e. they diagonalise m^T m
 * without forming it.
 */
inline svd_result svd(const mat& m) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    mat w = m;
    mat v = mat::identity(c);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p)
            for (std::size_t q = p + 1; q < c; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (gamma == 0.0 || std::fabs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < r; ++i) {
                    const double a = w(i, p);
                    const double b = w(i, q);
                    w(i, p) = cs * a - sn * b;
                    w(i, q) = sn * a + cs * b;
                }
                for (std::size_t i = 0; i < c; ++i) {
                    const double a = v(i, p);
                    const double b = v(i, q);
                    v(i, p) = cs * a - sn * b;
                    v(i, q) = sn * a + cs * b;
                }
            }
        if (!rotated) break;
    }
    vec s(c);
    for (std::size_t j = 0; j < c; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r; ++i) acc += w(i, j) * w(i, j);
        s[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    svd_result out{vec(c), mat(r, c), mat(c, c)};
    for (std::size_t k = 0; k < c; ++k) {
        const std::size_t j = order[k];
        out.s[k] = s[j];
        for (std::size_t i = 0; i < c; ++i) out.v(i, k) = v(i, j);
        for (std::size_t i = 0; i < r; ++i) out.u(i, k) = s[j] > 0 ? w(i, j) / s[j] : 0.0;
    }
    return out;
}

/**
 * \brief Largest singular value by power iteration on m^T m.
 *
 * The start vector is the column of (m^T m)^256 (eight normalised
 * squarings) with the largest diagonal entry, so a coordinate vector that
 * happens to be a lower eigenvector cannot trap the iteration. The result
 * is the largest Rayleigh quotient seen, floored at the largest squared
 * column norm, hence never below max |m_ij|.
 */
inline double top_singular_value(const mat& m, int max_iter = 500) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    if (r == 0 || c == 0) return 0.0;
    mat b(c, c);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = i; j < c; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < r; ++k) acc += m(k, i) * m(k, j);
            b(i, j) = b(j, i) = acc;
        }
    double best = 0.0;
    for (std::size_t j = 0; j < c; ++j) best = std::max(best, b(j, j));
    if (!(best > 0.0)) return 0.0;
    mat p = b;
    for (int k = 0; k < 8; ++k) {
        p = p * p;
        const double s = max_abs_norm(p);
        if (!(s > 0.0)) break;
        p *= 1.0 / s;
    }
    std::size_t j0 = 0;
    for (std::size_t j = 1; j < c; ++j)
        if (p(j, j) > p(j0, j0)) j0 = j;
    vec x(c), y(c);
    double nx = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        x[i] = p(i, j0);
        nx += x[i] * x[i];
    }
    if (!(nx > 0.0)) {
        std::fill(x.begin(), x.end(), 0.0);
        x[j0] = 1.0;
        nx = 1.0;
    }
    for (auto& t : x) t /= std::sqrt(nx);
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        // q = x^T B x, then x <- B x / |B x|
        double q = 0.0, ny = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < c; ++j) acc += b(i, j) * x[j];
            y[i] = acc;
            q += x[i] * acc;
            ny += acc * acc;
        }
        best = std::max(best, q);
        if (!(ny > 0.0) || std::fabs(q - prev) <= 1e-13 * q) break;
        prev = q;
        ny = std::sqrt(ny);
        for (std::size_t i = 0; i < c; ++i) x[i] = y[i] / ny;
    }
    return std::sqrt(best);
}

/** \brief Descending singular values of a square matrix. */
inline vec singular_values(const mat& m) {
    if (!m.square()) throw shape_error("singular_values needs a square matrix");
    return svd(m).s;
}

struct eigen_result {
    vec values;   ///< descending
    mat vectors;  ///< column k belongs to values[k]
};

/** \brief Cyclic Jacobi eigen-solver for symmetric matrices. */
inline eigen_result sym_eigen(const mat& sym) {
    if (!sym.square()) throw shape_error("sym_eigen needs a square matrix");
    const std::size_t n = sym.rows();
    mat a = sym;
    mat v = mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= 1e-32 * std::max(diag, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    eigen_result out{vec(n), mat(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// LU based helpers

/** \brief Determinant by partial-pivot elimination. */
template <class T>
T det(const basic_mat<T>& m) {
    if (!m.square()) throw shape_error("det needs a square matrix");
    basic_mat<T> a = m;
    const std::size_t n = a.rows();
    T result = T(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (abs_of(a(i, k)) > abs_of(a(piv, k))) piv = i;
        if (a(piv, k) == T(0)) return T(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            result = -result;
        }
        result *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return result;
}

/** \brief Inverse by Gauss-Jordan with partial pivoting. */
template <class T>
basic_mat<T> inverse(const basic_mat<T>& m) {
    if (!m.square()) throw shape_error("inverse needs a square matrix");
    const std::size_t n = m.rows();
    basic_mat<T> a = m;
    basic_mat<T> inv = basic_mat<T>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (abs_of(a(i, k)) > abs_of(a(piv, k))) piv = i;
        if (a(piv, k) == T(0)) throw domain_error("singular matrix");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(k, j), a(piv, j));
            std::swap(inv(k, j), inv(piv, j));
        }
        const T p = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= p;
            inv(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == T(0)) continue;
            const T f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// exponential

/** \brief True when some power m^k (k <= rows) is exactly zero. */
template <class T>
bool is_nilpotent_exact(const basic_mat<T>& m, std::size_t* degree = nullptr) {
    basic_mat<T> p = m;
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        if (max_abs_norm(p) == T(0)) {
            if (degree) *degree = k;
            return true;
        }
        p = p * m;
    }
    return false;
}

/** \brief exp of an exactly nilpotent matrix: finite sum. */
template <class T>
basic_mat<T> expm_nilpotent(const basic_mat<T>& m) {
    const std::size_t n = m.rows();
    basic_mat<T> result = basic_mat<T>::identity(n);
    basic_mat<T> term = basic_mat<T>::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        term = term * m;
        if (max_abs_norm(term) == T(0)) break;
        term *= T(1) / T(static_cast<double>(k));
        result += term;
    }
    return result;
}

/**
 * \brief Matrix exponential.
 *
 * Exactly nilpotent inputs use the terminating series; everything else uses
 * scaling and squaring around a degree-24 Taylor core.
 * \throws overflow_error when the result leaves the double range.
 */
template <class T>
basic_mat<T> expm(const basic_mat<T>& m) {
    if (!m.square()) throw shape_error("expm needs a square matrix");
    const std::size_t n = m.rows();
    if (!all_finite(m)) throw overflow_error("expm: non-finite input");
    if (is_nilpotent_exact(m)) return expm_nilpotent(m);
    const double nrm = norm1(m);
    if (nrm > 1400.0) throw overflow_error("expm: input norm " + std::to_string(nrm) + " exceeds the supported range");
    int s = 0;
    if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
    basic_mat<T> a = m;
    a *= T(std::ldexp(1.0, -s));
    basic_mat<T> result = basic_mat<T>::identity(n);
    basic_mat<T> term = basic_mat<T>::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = term * a;
        term *= T(1) / T(static_cast<double>(k));
        result += term;
    }
    for (int k = 0; k < s; ++k) result = result * result;
    if (!all_finite(result)) throw overflow_error("expm: result overflowed");
    return result;
}

// ---------------------------------------------------------------------------
// subspaces; a list of vectors is a std::vector<vec>

inline mat rows_to_mat(const std::vector<vec>& rows, std::size_t width) {
    mat m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) throw shape_error("vector length mismatch");
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

inline double dot(const vec& a, const vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const vec& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

inline vec axpy(double s, const vec& x, vec y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
    return y;
}

/** \brief Orthonormal basis of the span of the given vectors. */
inline std::vector<vec> orth(const std::vector<vec>& vs, std::size_t width, double tol = 1e-10) {
    if (vs.empty()) return {};
    const svd_result r = svd(rows_to_mat(vs, width));
    std::vector<vec> out;
    const double scale = std::max(1.0, r.s.empty() ? 0.0 : r.s[0]);
    for (std::size_t k = 0; k < r.s.size(); ++k) {
        if (r.s[k] <= tol * scale) break;
        vec b(width);
        for (std::size_t i = 0; i < width; ++i) b[i] = r.v(i, k);
        out.push_back(std::move(b));
    }
    return out;
}

inline std::size_t rank(const std::vector<vec>& vs, std::size_t width, double tol = 1e-10) {
    return orth(vs, width, tol).size();
}

/** \brief Orthonormal basis of {x : a x = 0} where a has the given rows. */
inline std::vector<vec> null_space(const std::vector<vec>& rows, std::size_t width, double tol = 1e-10) {
    std::vector<vec> out;
    if (rows.empty()) {
        for (std::size_t k = 0; k < width; ++k) {
            vec e(width, 0.0);
            e[k] = 1.0;
            out.push_back(e);
        }
        return out;
    }
    const svd_result r = svd(rows_to_mat(rows, width));
    const double scale = std::max(1.0, r.s.empty() ? 0.0 : r.s[0]);
    for (std::size_t k = 0; k < width; ++k) {
        if (k < r.s.size() && r.s[k] > tol * scale) continue;
        vec b(width);
        for (std::size_t i = 0; i < width; ++i) b[i] = r.v(i, k);
        out.push_back(std::move(b));
    }
    return out;
}

/** \brief Orthogonal projection of x onto the span of an orthonormal basis. */
inline vec project(const vec& x, const std::vector<vec>& onb) {
    vec p(x.size(), 0.0);
    for (const auto& b : onb) p = axpy(dot(x, b), b, p);
    return p;
}

/** \brief Distance from x to the span of an orthonormal basis. */
inline double distance_to_span(const vec& x, const std::vector<vec>& onb) {
    vec r = x;
    for (const auto& b : onb) r = axpy(-dot(r, b), b, r);
    return norm2(r);
}

/** \brief Orthonormal basis of the intersection of two spans. */
inline std::vector<vec> intersect(const std::vector<vec>& a, const std::vector<vec>& b, std::size_t width,
                                  double tol = 1e-10) {
    const auto oa = orth(a, width, tol);
    const auto ob = orth(b, width, tol);
    if (oa.empty() || ob.empty()) return {};
    // x = sum s_i a_i = sum t_j b_j  <=>  [A^T | -B^T] (s,t) = 0
    const std::size_t k = oa.size() + ob.size();
    std::vector<vec> rows(width, vec(k, 0.0));
    for (std::size_t i = 0; i < width; ++i) {
        for (std::size_t p = 0; p < oa.size(); ++p) rows[i][p] = oa[p][i];
        for (std::size_t q = 0; q < ob.size(); ++q) rows[i][oa.size() + q] = -ob[q][i];
    }
    std::vector<vec> gens;
    for (const auto& st : null_space(rows, k, tol)) {
        vec x(width, 0.0);
        for (std::size_t p = 0; p < oa.size(); ++p) x = axpy(st[p], oa[p], x);
        gens.push_back(x);
    }
    return orth(gens, width, tol);
}

/** \brief Least-squares solution of a x = b, a given by rows. */
inline vec least_squares(const std::vector<vec>& rows, std::size_t width, const vec& b, double tol = 1e-12) {
    if (rows.empty()) return vec(width, 0.0);
    const mat a = rows_to_mat(rows, width);
    const svd_result r = svd(a);
    vec x(width, 0.0);
    const double scale = std::max(1.0, r.s.empty() ? 0.0 : r.s[0]);
    for (std::size_t k = 0; k < r.s.size(); ++k) {
        if (r.s[k] <= tol * scale) break;
        double c = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) c += r.u(i, k) * b[i];
        c /= r.s[k];
        for (std::size_t j = 0; j < width; ++j) x[j] += c * r.v(j, k);
    }
    return x;
}

} // namespace cartankit
