#pragma once

/**
 * \file group.hpp
 * \brief The two target groups SL(3,R) and SO(2,n): form matrix, root data,
 * membership and Cartan projections.
 */

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace cartankit {

/** \brief Reduced fraction num/den with den > 0. */
struct rational {
    long long num = 0;
    long long den = 1;

    constexpr rational() = default;
    rational(long long n, long long d = 1) : num(n), den(d) {
        if (den == 0) throw domain_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const rational& a, const rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
    friend bool operator<(const rational& a, const rational& b) { return a.num * b.den < b.num * a.den; }
};

enum class group_kind { sl3, so2n };

inline std::string to_string(group_kind k) { return k == group_kind::sl3 ? "SL3" : "SO2n"; }

/** \brief A positive restricted root and the coordinates of its root space. */
struct positive_root {
    std::string name;              ///< "alpha", "beta", "alpha+beta", "alpha+2beta"
    vec functional;                ///< coefficients on the toral coordinates
    std::vector<std::size_t> mask; ///< indices of the root space inside a coordinate vector
    int height = 1;
};

struct root_data {
    std::vector<positive_root> positive; ///< alpha, beta first
    const positive_root& alpha() const { return positive[0]; }
    const positive_root& beta() const { return positive[1]; }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < positive.size(); ++i)
            if (positive[i].name == name) return i;
        throw domain_error("unknown root " + name);
    }
};

/**
 * \brief Group description.
 *
 * Coordinate vectors are flat: SO2n uses (t1, t2, phi, x[n-2], y[n-2], eta),
 * SL3 uses (d1, d2, d3, u1, u2, u3).
 */
struct group_spec {
    group_kind kind = group_kind::so2n;
    int n = 0;                  ///< SO2n only
    std::size_t d = 0;          ///< ambient dimension
    std::size_t wedge = 0;      ///< d(d-1)/2
    mat J;                      ///< invariant form (SO2n only)
    rational k1, k2;            ///< wall exponents
    int toral_rank = 2;
    std::size_t toral_dim = 0;  ///< number of toral coordinates
    std::size_t coord_dim = 0;  ///< length of a coordinate vector
    root_data roots;

    bool is_so2n() const { return kind == group_kind::so2n; }
    std::size_t m() const { return is_so2n() ? static_cast<std::size_t>(n - 2) : 0; }

    // SO2n coordinate offsets
    std::size_t i_phi() const { return 2; }
    std::size_t i_x(std::size_t k = 0) const { return 3 + k; }
    std::size_t i_y(std::size_t k = 0) const { return 3 + m() + k; }
    std::size_t i_eta() const { return 3 + 2 * m(); }
    // SL3 coordinate offsets
    std::size_t i_u(std::size_t k) const { return 3 + k; }

    std::string name() const { return is_so2n() ? "SO(2," + std::to_string(n) + ")" : "SL(3,R)"; }
};

/** \brief Build SL3 or SO(2,n), n >= 3. */
inline group_spec make_group(group_kind kind, int n = 0) {
    group_spec g;
    g.kind = kind;
    if (kind == group_kind::sl3) {
        g.d = 3;
        g.k1 = rational(1, 2);
        g.k2 = rational(2);
        g.toral_dim = 3;
        g.coord_dim = 6;
        g.roots.positive = {
            {"alpha", {1, -1, 0}, {3}, 1},
            {"beta", {0, 1, -1}, {4}, 1},
            {"alpha+beta", {1, 0, -1}, {5}, 2},
        };
    } else {
        if (n < 3) throw domain_error("SO(2,n) needs n >= 3, got " + std::to_string(n));
        g.n = n;
        g.d = static_cast<std::size_t>(n) + 2;
        g.k1 = rational(1);
        g.k2 = rational(2);
        g.toral_dim = 2;
        g.coord_dim = 2 * static_cast<std::size_t>(n);
        const std::size_t m = g.m();
        std::vector<std::size_t> xs, ys;
        for (std::size_t k = 0; k < m; ++k) {
            xs.push_back(3 + k);
            ys.push_back(3 + m + k);
        }
        g.roots.positive = {
            {"alpha", {1, -1}, {2}, 1},
            {"beta", {0, 1}, ys, 1},
            {"alpha+beta", {1, 0}, xs, 2},
            {"alpha+2beta", {1, 1}, {3 + 2 * m}, 3},
        };
        // v1 v_{n+2} + v2 v_{n+1} + (1/2) sum v_i^2: the normalisation that
        // makes the displayed a+n matrices skew for the form.
        g.J = mat(g.d, g.d);
        g.J(0, g.d - 1) = g.J(g.d - 1, 0) = 0.5;
        g.J(1, g.d - 2) = g.J(g.d - 2, 1) = 0.5;
        for (std::size_t i = 2; i < g.d - 2; ++i) g.J(i, i) = 0.5;
    }
    g.wedge = wedge_dim(g.d);
    return g;
}

inline double evaluate_root(const positive_root& r, const vec& coords) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.functional.size(); ++i) s += r.functional[i] * coords[i];
    return s;
}

/** \brief Residuals behind the membership test. */
struct membership_report {
    bool member = false;
    double form_residual = 0.0; ///< max |g^T J g - J| (SO2n), relative to max(1, |g|^2)
    double det_residual = 0.0;  ///< |det g - 1|, same scaling
};

inline membership_report membership(const group_spec& spec, const mat& g, double tol = 1e-9) {
    if (!g.square() || g.rows() != spec.d) throw shape_error("matrix size does not match the group");
    membership_report r;
    const double n1 = max_abs_norm(g);
    const double scale = std::max(1.0, n1 * n1);
    if (spec.is_so2n()) {
        r.form_residual = max_abs_norm(g.transpose() * spec.J * g - spec.J) / scale;
    }
    r.det_residual = std::fabs(static_cast<double>(det(convert<long double>(g))) - 1.0) / scale;
    r.member = r.form_residual <= tol && r.det_residual <= tol;
    return r;
}

/** \brief g^T J g = J and det g = 1 up to tol (residuals scaled by max(1,|g|^2)). */
inline bool is_member(const group_spec& spec, const mat& g, double tol = 1e-9) {
    return membership(spec, g, tol).member;
}

/** \brief Log coordinates of a point of the closed positive chamber. */
struct chamber_point {
    vec lambda; ///< (l1, l2) for SO2n, (l1, l2, l3) for SL3

    double chi1() const { return lambda[0]; }
    double chi2() const { return lambda[0] + lambda[1]; }
};

inline double chamber_distance(const chamber_point& a, const chamber_point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.lambda.size(); ++i) s += (a.lambda[i] - b.lambda[i]) * (a.lambda[i] - b.lambda[i]);
    return std::sqrt(s);
}

/**
 * \brief mu(g) from the singular values of g.
 *
 * K = G intersect O(d) is maximal compact for both realizations, so the
 * singular values of g are those of its A+ component. For SO2n the
 * singular values must pair reciprocally; a violation beyond tol raises
 * not_member_error.
 */
inline chamber_point cartan_projection_exact(const group_spec& spec, const mat& g, double tol = 1e-6) {
    if (!g.square() || g.rows() != spec.d) throw shape_error("matrix size does not match the group");
    const vec s = singular_values(g);
    chamber_point p;
    if (spec.is_so2n()) {
        for (std::size_t i = 0; i < spec.d / 2; ++i) {
            const double pr = s[i] * s[spec.d - 1 - i];
            if (!(std::fabs(pr - 1.0) <= tol))
                throw not_member_error("singular values do not pair reciprocally (sigma_" + std::to_string(i + 1) +
                                       " * sigma_" + std::to_string(spec.d - i) + " = " + std::to_string(pr) + ")");
        }
        p.lambda = {std::log(s[0]), std::log(s[1])};
        if (p.lambda[1] < 0.0) p.lambda[1] = 0.0;
    } else {
        const double pr = s[0] * s[1] * s[2];
        if (!(std::fabs(pr - 1.0) <= tol)) throw not_member_error("singular values do not multiply to 1");
        p.lambda = {std::log(s[0]), std::log(s[1]), std::log(s[2])};
        const double mean = (p.lambda[0] + p.lambda[1] + p.lambda[2]) / 3.0;
        for (auto& l : p.lambda) l -= mean;
    }
    return p;
}

/** \brief (N1, N2) = (max-entry norm of g, of g ^ g). */
inline std::pair<double, double> cartan_projection_approx(const group_spec& spec, const mat& g) {
    if (!g.square() || g.rows() != spec.d) throw shape_error("matrix size does not match the group");
    return {max_abs_norm(g), max_abs_norm(wedge_square(g))};
}

/** \brief i(mu): reversal-negation for SL3, identity for SO2n. */
inline chamber_point opposition_involution(const group_spec& spec, const chamber_point& p) {
    if (spec.is_so2n()) return p;
    return chamber_point{{-p.lambda[2], -p.lambda[1], -p.lambda[0]}};
}

/** \brief Random element of K = exp(X), X skew and commuting with J. */
inline mat sample_compact(const group_spec& spec, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::size_t d = spec.d;
    mat x(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double v = scale * nd(rng);
            x(i, j) = v;
            x(j, i) = -v;
        }
    if (spec.is_so2n()) {
        // 2J squares to the identity; split along its +-1 eigenspaces
        const mat jj = spec.J * 2.0;
        const mat id = mat::identity(d);
        const mat pp = (id + jj) * 0.5;
        const mat pm = (id - jj) * 0.5;
        x = pp * x * pp + pm * x * pm;
    }
    return expm(x);
}

/** \brief Log norms and log singular-value data of one group element. */
struct log_profile {
    double logN1 = 0.0;  ///< log max|g_ij|
    double logN2 = 0.0;  ///< log max|2x2 minor|
    double logS1 = 0.0;  ///< log sigma_1 = chi_1
    double logS12 = 0.0; ///< log sigma_1 + log sigma_2 = chi_2
};

/**
 * \brief Norms and exact chi-coordinates of g, guarded against overflow.
 *
 * Minors are formed in the scalar type of g, then rescaled by their maximum
 * before a double power iteration; sigma_1 sigma_2 is read off as the top
 * singular value of g ^ g.
 */
template <class T>
log_profile profile_of(const basic_mat<T>& g) {
    log_profile p;
    const T n1 = max_abs_norm(g);
    const double dn1 = static_cast<double>(n1);
    if (!(dn1 > 0.0) || !std::isfinite(dn1)) throw overflow_error("profile: norm out of range");
    basic_mat<T> gs = g;
    gs *= T(1) / n1;
    const mat gd = convert<double>(gs);
    p.logN1 = std::log(dn1);
    p.logS1 = p.logN1 + std::log(top_singular_value(gd));

    const basic_mat<T> w = wedge_square(gs);
    const T n2 = max_abs_norm(w);
    const double dn2 = static_cast<double>(n2);
    if (!(dn2 > 0.0) || !std::isfinite(dn2)) throw overflow_error("profile: minor norm out of range");
    basic_mat<T> ws = w;
    ws *= T(1) / n2;
    const mat wd = convert<double>(ws);
    const double log_minor_max = std::log(dn2);
    p.logN2 = 2.0 * p.logN1 + log_minor_max;
    p.logS12 = p.logN2 + std::log(top_singular_value(wd));
    return p;
}

} // namespace cartankit
