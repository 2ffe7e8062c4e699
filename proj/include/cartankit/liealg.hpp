#pragma once

/**
 * \file liealg.hpp
 * \brief Coordinates on a+n, brackets, subalgebra checks, compatibility
 * with A, standard forms and exponentials of subgroup elements.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "linalg.hpp"

namespace cartankit {

using quad = __float128;

// ---------------------------------------------------------------------------
// coordinate vectors

inline vec zero_coord(const group_spec& g) { return vec(g.coord_dim, 0.0); }

inline bool is_toral_index(const group_spec& g, std::size_t k) { return k < g.toral_dim; }

/** \brief Index of the positive root whose space holds coordinate k, or -1 for toral coordinates. */
inline int root_of_index(const group_spec& g, std::size_t k) {
    for (std::size_t r = 0; r < g.roots.positive.size(); ++r)
        for (std::size_t i : g.roots.positive[r].mask)
            if (i == k) return static_cast<int>(r);
    return -1;
}

inline vec toral_part(const group_spec& g, const vec& v) {
    vec r = zero_coord(g);
    for (std::size_t k = 0; k < g.toral_dim; ++k) r[k] = v[k];
    return r;
}

inline vec nil_part(const group_spec& g, const vec& v) {
    vec r = v;
    for (std::size_t k = 0; k < g.toral_dim; ++k) r[k] = 0.0;
    return r;
}

inline double toral_size(const group_spec& g, const vec& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.toral_dim; ++k) s = std::max(s, std::fabs(v[k]));
    return s;
}

inline double nil_size(const group_spec& g, const vec& v) {
    double s = 0.0;
    for (std::size_t k = g.toral_dim; k < g.coord_dim; ++k) s = std::max(s, std::fabs(v[k]));
    return s;
}

/** \brief Component of v in the root space of root r (length = mask size). */
inline vec root_component(const group_spec& g, const vec& v, std::size_t r) {
    vec c;
    for (std::size_t i : g.roots.positive[r].mask) c.push_back(v[i]);
    return c;
}

/** \brief SO2n coordinates from named parts; x and y have length n-2. */
inline vec so2n_coord(const group_spec& g, double t1, double t2, double phi, const vec& x, const vec& y, double eta) {
    if (!g.is_so2n()) throw domain_error("so2n_coord on a non-SO2n group");
    const std::size_t m = g.m();
    if (x.size() != m || y.size() != m) throw shape_error("x and y must have length n-2");
    vec v = zero_coord(g);
    v[0] = t1;
    v[1] = t2;
    v[g.i_phi()] = phi;
    for (std::size_t k = 0; k < m; ++k) {
        v[g.i_x(k)] = x[k];
        v[g.i_y(k)] = y[k];
    }
    v[g.i_eta()] = eta;
    return v;
}

inline vec sl3_coord(double d1, double d2, double d3, double u1, double u2, double u3) {
    return {d1, d2, d3, u1, u2, u3};
}

/** \brief Unit vector e_k in coordinate space. */
inline vec unit_coord(const group_spec& g, std::size_t k) {
    vec v = zero_coord(g);
    v.at(k) = 1.0;
    return v;
}

/** \brief Matrix of a coordinate vector; SO2n is form-skew, SL3 upper triangular. */
template <class T = double>
basic_mat<T> coord_to_matrix(const group_spec& g, const std::vector<T>& v) {
    if (v.size() != g.coord_dim) throw shape_error("coordinate vector has wrong length");
    basic_mat<T> m(g.d, g.d);
    if (!g.is_so2n()) {
        m(0, 0) = v[0];
        m(1, 1) = v[1];
        m(2, 2) = v[2];
        m(0, 1) = v[3];
        m(1, 2) = v[4];
        m(0, 2) = v[5];
        return m;
    }
    const std::size_t n = static_cast<std::size_t>(g.n);
    m(0, 0) = v[0];
    m(1, 1) = v[1];
    m(n, n) = -v[1];
    m(n + 1, n + 1) = -v[0];
    m(0, 1) = v[g.i_phi()];
    m(n, n + 1) = -v[g.i_phi()];
    for (std::size_t k = 0; k < g.m(); ++k) {
        m(0, 2 + k) = v[g.i_x(k)];
        m(2 + k, n + 1) = -v[g.i_x(k)];
        m(1, 2 + k) = v[g.i_y(k)];
        m(2 + k, n) = -v[g.i_y(k)];
    }
    m(0, n) = v[g.i_eta()];
    m(1, n + 1) = -v[g.i_eta()];
    return m;
}

/** \brief Coordinates read from the first two rows (SO2n) or the upper triangle (SL3). */
template <class T>
std::vector<T> matrix_to_coord(const group_spec& g, const basic_mat<T>& m) {
    if (m.rows() != g.d || m.cols() != g.d) throw shape_error("matrix size does not match the group");
    std::vector<T> v(g.coord_dim, T(0));
    if (!g.is_so2n()) {
        v[0] = m(0, 0);
        v[1] = m(1, 1);
        v[2] = m(2, 2);
        v[3] = m(0, 1);
        v[4] = m(1, 2);
        v[5] = m(0, 2);
        return v;
    }
    const std::size_t n = static_cast<std::size_t>(g.n);
    v[0] = m(0, 0);
    v[1] = m(1, 1);
    v[g.i_phi()] = m(0, 1);
    for (std::size_t k = 0; k < g.m(); ++k) {
        v[g.i_x(k)] = m(0, 2 + k);
        v[g.i_y(k)] = m(1, 2 + k);
    }
    v[g.i_eta()] = m(0, n);
    return v;
}

/** \brief Coordinates of [u, v] = UV - VU. */
inline vec bracket(const group_spec& g, const vec& u, const vec& v) {
    const mat a = coord_to_matrix(g, u);
    const mat b = coord_to_matrix(g, v);
    return matrix_to_coord(g, mat(a * b - b * a));
}

/** \brief Coordinates of Ad(h) v = h V h^{-1}. */
inline vec adjoint(const group_spec& g, const mat& h, const vec& v) {
    return matrix_to_coord(g, mat(h * coord_to_matrix(g, v) * inverse(h)));
}

// ---------------------------------------------------------------------------
// subalgebras

struct subalgebra {
    group_spec spec;
    std::vector<vec> basis;
    std::size_t dim() const { return basis.size(); }
};

/** \brief Outcome of check_subalgebra; i, j name the offending pair when closure fails. */
struct subalgebra_check {
    bool ok = true;
    std::string reason;
    std::size_t i = 0;
    std::size_t j = 0;
    double residual = 0.0;
};

inline subalgebra_check check_subalgebra(const group_spec& g, const std::vector<vec>& basis) {
    subalgebra_check r;
    if (basis.empty()) {
        r.ok = false;
        r.reason = "empty basis";
        return r;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].size() != g.coord_dim) {
            r.ok = false;
            r.reason = "basis vector " + std::to_string(i) + " has length " + std::to_string(basis[i].size()) +
                       ", expected " + std::to_string(g.coord_dim);
            r.i = i;
            return r;
        }
        for (double x : basis[i])
            if (!std::isfinite(x)) {
                r.ok = false;
                r.reason = "non-finite entry";
                r.i = i;
                return r;
            }
        if (!g.is_so2n() && std::fabs(basis[i][0] + basis[i][1] + basis[i][2]) > 1e-12) {
            r.ok = false;
            r.reason = "diagonal part of basis vector " + std::to_string(i) + " is not traceless";
            r.i = i;
            return r;
        }
    }
    if (rank(basis, g.coord_dim) != basis.size()) {
        r.ok = false;
        r.reason = "basis is linearly dependent";
        return r;
    }
    const auto onb = orth(basis, g.coord_dim);
    double scale = 0.0;
    for (const auto& b : basis) scale = std::max(scale, max_abs(b));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            const vec c = bracket(g, basis[i], basis[j]);
            const double res = distance_to_span(c, onb) / std::max(1.0, scale * scale);
            if (res > 1e-9) {
                r.ok = false;
                r.reason = "bracket of basis vectors " + std::to_string(i) + " and " + std::to_string(j) +
                           " leaves the span";
                r.i = i;
                r.j = j;
                r.residual = res;
                return r;
            }
        }
    return r;
}

/** \brief Validated subalgebra. \throws not_subalgebra_error */
inline subalgebra make_subalgebra(const group_spec& g, std::vector<vec> basis) {
    const auto r = check_subalgebra(g, basis);
    if (!r.ok) throw not_subalgebra_error(r.reason);
    return subalgebra{g, std::move(basis)};
}

// ---------------------------------------------------------------------------
// exponentials

/** \brief exp of the nilpotent element h(phi, x, y, eta) in closed form. */
template <class T>
basic_mat<T> exp_n_closed(const group_spec& g, T phi, const std::vector<T>& x, const std::vector<T>& y, T eta) {
    if (!g.is_so2n()) throw domain_error("exp_n_closed needs SO(2,n)");
    const std::size_t m = g.m();
    if (x.size() != m || y.size() != m) throw shape_error("x and y must have length n-2");
    const std::size_t n = static_cast<std::size_t>(g.n);
    T xy = T(0), xx = T(0), yy = T(0);
    for (std::size_t k = 0; k < m; ++k) {
        xy += x[k] * y[k];
        xx += x[k] * x[k];
        yy += y[k] * y[k];
    }
    const T half = T(1) / T(2);
    basic_mat<T> e = basic_mat<T>::identity(g.d);
    e(0, 1) = phi;
    for (std::size_t k = 0; k < m; ++k) {
        e(0, 2 + k) = x[k] + half * phi * y[k];
        e(1, 2 + k) = y[k];
        e(2 + k, n) = -y[k];
        e(2 + k, n + 1) = -x[k] + half * phi * y[k];
    }
    e(0, n) = eta - half * xy - phi * yy / T(6);
    e(0, n + 1) = -phi * eta - half * xx + phi * phi * yy / T(24);
    e(1, n) = -half * yy;
    e(1, n + 1) = -eta - half * xy + phi * yy / T(6);
    e(n, n + 1) = -phi;
    return e;
}

/** \brief exp of a purely nilpotent coordinate vector in the scalar type T. */
template <class T>
basic_mat<T> exp_nil(const group_spec& g, const std::vector<T>& v) {
    if (g.is_so2n()) {
        std::vector<T> x(g.m()), y(g.m());
        for (std::size_t k = 0; k < g.m(); ++k) {
            x[k] = v[g.i_x(k)];
            y[k] = v[g.i_y(k)];
        }
        return exp_n_closed<T>(g, v[g.i_phi()], x, y, v[g.i_eta()]);
    }
    basic_mat<T> e = basic_mat<T>::identity(3);
    e(0, 1) = v[3];
    e(1, 2) = v[4];
    e(0, 2) = v[5] + v[3] * v[4] / T(2);
    return e;
}

/** \brief Diagonal entries of the matrix of the toral part of v. */
inline vec toral_diagonal(const group_spec& g, const vec& v) {
    if (!g.is_so2n()) return {v[0], v[1], v[2]};
    vec d(g.d, 0.0);
    d[0] = v[0];
    d[1] = v[1];
    d[g.d - 2] = -v[1];
    d[g.d - 1] = -v[0];
    return d;
}

/**
 * \brief Splitting of X = a + n as P^{-1} (a + n_c) P with [a, n_c] = 0.
 *
 * P is a product of unipotent exponentials that clears the root components
 * with omega(a) != 0, lowest height first.
 */
struct split_element {
    vec toral;            ///< diagonal of a
    vec nil;              ///< n_c as a coordinate vector
    bool conjugated = false;
    mat p;                ///< P (identity when X already commutes)
    mat p_inv;
};

inline split_element split_jordan(const group_spec& g, const vec& x, double tol = 1e-13) {
    split_element s;
    s.toral = toral_diagonal(g, x);
    s.p = mat::identity(g.d);
    s.p_inv = mat::identity(g.d);
    const vec a = toral_part(g, x);
    const double ascale = std::max(toral_size(g, x), 1e-300);
    vec cur = x;
    for (int height = 1; height <= 3; ++height) {
        vec z = zero_coord(g);
        bool any = false;
        for (std::size_t r = 0; r < g.roots.positive.size(); ++r) {
            const auto& root = g.roots.positive[r];
            if (root.height != height) continue;
            const double w = evaluate_root(root, a);
            if (std::fabs(w) <= tol * ascale) continue;
            for (std::size_t i : root.mask)
                if (cur[i] != 0.0) {
                    z[i] = cur[i] / w;
                    any = true;
                }
        }
        if (!any) continue;
        // Ad(exp z)(a + n) = a + n - ad_a z + ... removes the height-h bad part
        const mat e = exp_nil(g, z);
        vec zm = z;
        for (auto& c : zm) c = -c;
        const mat ei = exp_nil(g, zm);
        cur = matrix_to_coord(g, mat(e * coord_to_matrix(g, cur) * ei));
        s.p = e * s.p;
        s.p_inv = s.p_inv * ei;
        s.conjugated = true;
        for (std::size_t r = 0; r < g.roots.positive.size(); ++r) {
            const auto& root = g.roots.positive[r];
            if (root.height == height && std::fabs(evaluate_root(root, a)) > tol * ascale)
                for (std::size_t i : root.mask) cur[i] = 0.0;
        }
    }
    s.nil = nil_part(g, cur);
    return s;
}

/** \brief Precomputed factor data for sampling exp(c_1 b_1) ... exp(c_m b_m). */
struct sample_plan {
    group_spec spec;
    std::vector<vec> basis;
    std::vector<split_element> factors;
};

inline sample_plan make_sample_plan(const group_spec& g, const std::vector<vec>& basis) {
    sample_plan p{g, basis, {}};
    for (const auto& b : basis) p.factors.push_back(split_jordan(g, b));
    return p;
}

/** \brief exp(c X) for one planned factor, in the scalar type T. */
template <class T>
basic_mat<T> exp_factor(const group_spec& g, const split_element& f, T c) {
    for (double t : f.toral)
        if (std::fabs(static_cast<double>(c) * t) > 700.0)
            throw overflow_error("coefficient leaves the supported range");
    std::vector<T> nil(g.coord_dim);
    for (std::size_t k = 0; k < g.coord_dim; ++k) nil[k] = c * T(f.nil[k]);
    if (std::fabs(static_cast<double>(c)) * max_abs(f.nil) > 1e100) throw overflow_error("coefficient too large");
    basic_mat<T> e = exp_nil<T>(g, nil);
    bool toral = false;
    for (double t : f.toral) toral = toral || t != 0.0;
    if (toral) {
        // row scaling by exp(c t_i); [a, n_c] = 0 so the factors commute
        for (std::size_t i = 0; i < g.d; ++i) {
            const long double ct = static_cast<long double>(c) * static_cast<long double>(f.toral[i]);
            const T s = T(std::exp(ct));
            for (std::size_t j = 0; j < g.d; ++j) e(i, j) *= s;
        }
    }
    if (f.conjugated) e = convert<T>(f.p_inv) * e * convert<T>(f.p);
    return e;
}

/** \brief exp(c_1 b_1) ... exp(c_m b_m); always in H and in G. */
template <class T>
basic_mat<T> group_sample_element(const sample_plan& plan, const std::vector<T>& coeffs) {
    if (coeffs.size() != plan.basis.size()) throw shape_error("one coefficient per basis vector expected");
    basic_mat<T> g = basic_mat<T>::identity(plan.spec.d);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == T(0)) continue;
        g = g * exp_factor<T>(plan.spec, plan.factors[i], coeffs[i]);
    }
    return g;
}

inline mat group_sample_element(const subalgebra& h, const vec& coeffs) {
    return group_sample_element<double>(make_sample_plan(h.spec, h.basis), coeffs);
}

// ---------------------------------------------------------------------------
// parts, weights, compatibility

/** \brief h intersect a, h intersect n and the toral projection T. */
struct parts {
    std::vector<vec> h_a;
    std::vector<vec> h_n;
    std::vector<vec> t;
};

inline parts decompose_parts(const group_spec& g, const std::vector<vec>& basis, double tol = 1e-10) {
    parts p;
    const std::size_t k = basis.size();
    // coefficient maps c -> toral(sum c_i b_i) and c -> nil(sum c_i b_i)
    std::vector<vec> tor_rows, nil_rows;
    for (std::size_t i = 0; i < g.coord_dim; ++i) {
        vec row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = basis[j][i];
        (is_toral_index(g, i) ? tor_rows : nil_rows).push_back(row);
    }
    auto combine = [&](const vec& c) {
        vec v = zero_coord(g);
        for (std::size_t j = 0; j < k; ++j) v = axpy(c[j], basis[j], v);
        return v;
    };
    std::vector<vec> a_gens, n_gens, t_gens;
    for (const auto& c : null_space(nil_rows, k, tol)) a_gens.push_back(toral_part(g, combine(c)));
    for (const auto& c : null_space(tor_rows, k, tol)) n_gens.push_back(nil_part(g, combine(c)));
    for (const auto& b : basis) t_gens.push_back(toral_part(g, b));
    p.h_a = orth(a_gens, g.coord_dim, tol);
    p.h_n = orth(n_gens, g.coord_dim, tol);
    p.t = orth(t_gens, g.coord_dim, tol);
    return p;
}

/** \brief Image of h under the projection onto u_omega (root index) or onto a (root < 0). */
inline std::vector<vec> weight_project(const group_spec& g, const std::vector<vec>& basis, int root,
                                       double tol = 1e-10) {
    std::vector<vec> imgs;
    for (const auto& b : basis) {
        vec p = zero_coord(g);
        if (root < 0) {
            p = toral_part(g, b);
        } else {
            for (std::size_t i : g.roots.positive.at(static_cast<std::size_t>(root)).mask) p[i] = b[i];
        }
        imgs.push_back(p);
    }
    return orth(imgs, g.coord_dim, tol);
}

/** \brief True when pi_omega(h) is inside h for every weight. */
inline bool is_a_normalized(const group_spec& g, const std::vector<vec>& basis, double tol = 1e-9) {
    const auto onb = orth(basis, g.coord_dim);
    for (int r = -1; r < static_cast<int>(g.roots.positive.size()); ++r)
        for (const auto& v : weight_project(g, basis, r))
            if (distance_to_span(v, onb) > tol) return false;
    return true;
}

/** \brief Indices of positive roots vanishing on every vector of T. */
inline std::vector<std::size_t> roots_vanishing_on(const group_spec& g, const std::vector<vec>& t, double tol = 1e-10) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < g.roots.positive.size(); ++r) {
        bool zero = true;
        for (const auto& v : t) zero = zero && std::fabs(evaluate_root(g.roots.positive[r], v)) <= tol;
        if (zero) out.push_back(r);
    }
    return out;
}

/** \brief Basis of c_n(T), the sum of root spaces on which T acts trivially. */
inline std::vector<vec> centralizer_in_n(const group_spec& g, const std::vector<vec>& t, double tol = 1e-10) {
    std::vector<vec> out;
    for (std::size_t r : roots_vanishing_on(g, t, tol))
        for (std::size_t i : g.roots.positive[r].mask) out.push_back(unit_coord(g, i));
    return out;
}

struct compatibility {
    bool compatible = false;
    double defect = 0.0;               ///< largest distance of a nil part from U + c_n(T)
    std::vector<vec> t, u, centralizer;
    std::vector<vec> coefficients;     ///< per basis vector: least-squares weights on (U, c_n(T)) generators
};

inline compatibility is_compatible(const group_spec& g, const std::vector<vec>& basis, double tol = 1e-9) {
    compatibility c;
    const parts p = decompose_parts(g, basis);
    c.t = p.t;
    c.u = p.h_n;
    c.centralizer = centralizer_in_n(g, p.t);
    std::vector<vec> gens = c.u;
    gens.insert(gens.end(), c.centralizer.begin(), c.centralizer.end());
    const auto onb = orth(gens, g.coord_dim);
    for (const auto& b : basis) {
        const vec n = nil_part(g, b);
        c.defect = std::max(c.defect, distance_to_span(n, onb));
        std::vector<vec> cols(g.coord_dim, vec(gens.size(), 0.0));
        for (std::size_t i = 0; i < g.coord_dim; ++i)
            for (std::size_t j = 0; j < gens.size(); ++j) cols[i][j] = gens[j][i];
        c.coefficients.push_back(least_squares(cols, gens.size(), n));
    }
    c.compatible = c.defect <= tol;
    return c;
}

// ---------------------------------------------------------------------------
// standard forms

enum class form_kind { inside_n, contains_a, semidirect, graph };

inline std::string to_string(form_kind k) {
    switch (k) {
    case form_kind::inside_n: return "InsideN";
    case form_kind::contains_a: return "ContainsA";
    case form_kind::semidirect: return "Semidirect";
    case form_kind::graph: return "Graph";
    }
    return "?";
}

/**
 * \brief Standard form of Ad(conjugator) h.
 *
 * basis spans the conjugated algebra. Semidirect and ContainsA fill
 * t_basis and u_basis; Graph fills omega, t_gen (spanning ker omega),
 * psi (coordinates inside u_omega) and u_basis.
 */
struct standard_form {
    form_kind kind = form_kind::inside_n;
    std::vector<vec> basis;
    std::vector<vec> t_basis;
    std::vector<vec> u_basis;
    int omega = -1;
    vec t_gen;
    vec psi;
    mat conjugator;
    double defect = 0.0;
};

namespace detail {

inline std::vector<vec> conjugate_basis(const group_spec& g, const mat& h, const std::vector<vec>& basis) {
    const mat hi = inverse(h);
    std::vector<vec> out;
    for (const auto& b : basis) out.push_back(matrix_to_coord(g, mat(h * coord_to_matrix(g, b) * hi)));
    return out;
}

// nil part of v with its U component removed
inline vec reduce_mod(const vec& v, const std::vector<vec>& onb) {
    vec r = v;
    for (const auto& b : onb) r = axpy(-dot(r, b), b, r);
    return r;
}

// mixed generator t + n of a dim-T = 1 algebra, n reduced modulo U
inline vec mixed_generator(const group_spec& g, const std::vector<vec>& basis, const parts& p) {
    const vec& t = p.t.at(0);
    std::vector<vec> rows;
    for (std::size_t i = 0; i < g.toral_dim; ++i) {
        vec row(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) row[j] = basis[j][i];
        rows.push_back(row);
    }
    vec rhs(g.toral_dim);
    for (std::size_t i = 0; i < g.toral_dim; ++i) rhs[i] = t[i];
    const vec c = least_squares(rows, basis.size(), rhs);
    vec x = zero_coord(g);
    for (std::size_t j = 0; j < basis.size(); ++j) x = axpy(c[j], basis[j], x);
    const vec n = reduce_mod(nil_part(g, x), p.h_n);
    vec out = toral_part(g, x);
    for (std::size_t k = g.toral_dim; k < g.coord_dim; ++k) out[k] = n[k];
    return out;
}

} // namespace detail

/**
 * \brief Classify the shape of h and conjugate it into compatible position.
 *
 * Non-compatible inputs with dim T = 1 are conjugated by exp(z), z in n,
 * with one Newton step on the root components per iteration.
 * \throws nonstandard_error when the iteration does not reach compatibility.
 */
inline standard_form to_standard_form(const group_spec& g, const std::vector<vec>& basis, int max_iter = 12) {
    standard_form sf;
    sf.conjugator = mat::identity(g.d);
    std::vector<vec> cur = orth(basis, g.coord_dim);
    parts p = decompose_parts(g, cur);
    if (p.t.size() > 2) throw domain_error("toral projection has dimension above 2");
    if (p.t.empty()) {
        sf.kind = form_kind::inside_n;
        sf.basis = cur;
        sf.u_basis = p.h_n;
        return sf;
    }
    if (p.t.size() == 2) {
        // A is contained in HN; split algebras are a + U already
        sf.kind = p.h_a.size() == 2 ? form_kind::semidirect : form_kind::contains_a;
        sf.basis = cur;
        sf.t_basis = p.t;
        sf.u_basis = p.h_n;
        sf.defect = is_compatible(g, cur).defect;
        return sf;
    }

    compatibility comp = is_compatible(g, cur);
    for (int it = 0; it < max_iter && !comp.compatible; ++it) {
        const vec x = detail::mixed_generator(g, cur, p);
        const vec a = toral_part(g, x);
        const double ascale = toral_size(g, a);
        // bad coordinates: root spaces where omega(T) != 0
        std::vector<std::size_t> bad;
        for (std::size_t k = g.toral_dim; k < g.coord_dim; ++k) {
            const int r = root_of_index(g, k);
            if (std::fabs(evaluate_root(g.roots.positive[static_cast<std::size_t>(r)], a)) > 1e-10 * ascale)
                bad.push_back(k);
        }
        // unknowns: z on bad coordinates and u in U; residual = bad part of x + [z, x] - u
        const std::size_t nz = bad.size();
        const std::size_t nu = p.h_n.size();
        std::vector<vec> rows(bad.size(), vec(nz + nu, 0.0));
        vec rhs(bad.size());
        for (std::size_t j = 0; j < nz; ++j) {
            const vec col = bracket(g, unit_coord(g, bad[j]), x);
            for (std::size_t i = 0; i < bad.size(); ++i) rows[i][j] = col[bad[i]];
        }
        for (std::size_t j = 0; j < nu; ++j)
            for (std::size_t i = 0; i < bad.size(); ++i) rows[i][nz + j] = -p.h_n[j][bad[i]];
        for (std::size_t i = 0; i < bad.size(); ++i) rhs[i] = -x[bad[i]];
        const vec sol = least_squares(rows, nz + nu, rhs);
        vec z = zero_coord(g);
        for (std::size_t j = 0; j < nz; ++j) z[bad[j]] = sol[j];
        if (nil_size(g, z) == 0.0) break;
        const mat e = exp_nil(g, z);
        cur = orth(detail::conjugate_basis(g, e, cur), g.coord_dim);
        sf.conjugator = e * sf.conjugator;
        p = decompose_parts(g, cur);
        comp = is_compatible(g, cur);
    }
    sf.defect = comp.defect;
    if (!comp.compatible) {
        std::ostringstream os;
        os << "could not conjugate the subalgebra into compatible position (defect " << comp.defect << ")";
        throw nonstandard_error(os.str(), comp.defect);
    }

    const vec x = detail::mixed_generator(g, cur, p);
    sf.u_basis = p.h_n;
    const auto vanish = roots_vanishing_on(g, p.t);
    vec w;
    if (!vanish.empty()) {
        // component of x in u_omega orthogonal to U
        const std::size_t r = vanish[0];
        w = zero_coord(g);
        for (std::size_t i : g.roots.positive[r].mask) w[i] = x[i];
        std::vector<vec> ur;
        for (std::size_t i : g.roots.positive[r].mask) ur.push_back(unit_coord(g, i));
        const auto u_in_root = intersect(p.h_n, ur, g.coord_dim);
        w = detail::reduce_mod(w, u_in_root);
    }
    if (vanish.empty() || nil_size(g, w) <= 1e-10 * std::max(1.0, toral_size(g, x))) {
        sf.kind = form_kind::semidirect;
        sf.t_basis = {toral_part(g, x)};
        sf.basis = sf.t_basis;
        sf.basis.insert(sf.basis.end(), sf.u_basis.begin(), sf.u_basis.end());
        return sf;
    }
    sf.kind = form_kind::graph;
    sf.omega = static_cast<int>(vanish[0]);
    sf.t_gen = toral_part(g, x);
    sf.psi = root_component(g, w, vanish[0]);
    vec gen = sf.t_gen;
    for (std::size_t k = g.toral_dim; k < g.coord_dim; ++k) gen[k] = w[k];
    sf.basis = {gen};
    sf.basis.insert(sf.basis.end(), sf.u_basis.begin(), sf.u_basis.end());
    return sf;
}

// ---------------------------------------------------------------------------
// SO(1,n) normal form

/** \brief Data of an algebra in n with y = 0: eta = p phi + b.x, X0 = x-parts at phi = 0. */
struct so1n_normal_form {
    std::vector<vec> x0;  ///< orthonormal basis of X0 in R^{n-2}
    vec b;                ///< in X0
    vec c;                ///< orthogonal to X0
    double p = 0.0;
    double delta = 0.0;   ///< |b|^2 - |c|^2 - 2p
    double residual = 0.0;
};

inline so1n_normal_form so1n_normal_form_of(const group_spec& g, const std::vector<vec>& basis, double tol = 1e-10) {
    if (!g.is_so2n()) throw domain_error("SO(1,n) normal form needs SO(2,n)");
    const std::size_t m = g.m();
    for (const auto& v : basis) {
        if (toral_size(g, v) > tol) throw domain_error("SO(1,n) normal form needs h inside n");
        for (std::size_t k = 0; k < m; ++k)
            if (std::fabs(v[g.i_y(k)]) > tol) throw domain_error("SO(1,n) normal form needs y = 0 on h");
    }
    // h intersect eta-axis must vanish: (phi, x) determines the element
    std::vector<vec> px;
    for (const auto& v : basis) {
        vec r(m + 1);
        r[0] = v[g.i_phi()];
        for (std::size_t k = 0; k < m; ++k) r[k + 1] = v[g.i_x(k)];
        px.push_back(r);
    }
    if (rank(px, m + 1, tol) != basis.size()) throw domain_error("SO(1,n) normal form needs h to meet the eta-axis trivially");

    so1n_normal_form nf;
    const std::size_t k = basis.size();
    // X0: elements with phi = 0
    std::vector<vec> phi_row{vec(k)};
    for (std::size_t j = 0; j < k; ++j) phi_row[0][j] = basis[j][g.i_phi()];
    auto combine = [&](const vec& c) {
        vec v = zero_coord(g);
        for (std::size_t j = 0; j < k; ++j) v = axpy(c[j], basis[j], v);
        return v;
    };
    std::vector<vec> x0_gens, x0_elems;
    for (const auto& c : null_space(phi_row, k, tol)) {
        const vec v = combine(c);
        x0_elems.push_back(v);
        vec xv(m);
        for (std::size_t i = 0; i < m; ++i) xv[i] = v[g.i_x(i)];
        x0_gens.push_back(xv);
    }
    nf.x0 = orth(x0_gens, m, tol);
    // b in X0 from eta = b.x on the phi = 0 elements
    nf.b = vec(m, 0.0);
    if (!x0_elems.empty()) {
        std::vector<vec> rows;
        vec rhs;
        for (const auto& v : x0_elems) {
            vec row(nf.x0.size());
            for (std::size_t q = 0; q < nf.x0.size(); ++q) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += nf.x0[q][i] * v[g.i_x(i)];
                row[q] = s;
            }
            rows.push_back(row);
            rhs.push_back(v[g.i_eta()]);
        }
        const vec coef = least_squares(rows, nf.x0.size(), rhs);
        for (std::size_t q = 0; q < nf.x0.size(); ++q) nf.b = axpy(coef[q], nf.x0[q], nf.b);
    }
    nf.c = vec(m, 0.0);
    const bool phi_free = max_abs(phi_row[0]) > tol;
    if (phi_free) {
        vec c(k, 0.0);
        std::size_t j0 = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (std::fabs(phi_row[0][j]) > std::fabs(phi_row[0][j0])) j0 = j;
        c[j0] = 1.0 / phi_row[0][j0];
        vec v = combine(c);
        vec xv(m);
        for (std::size_t i = 0; i < m; ++i) xv[i] = v[g.i_x(i)];
        const vec xproj = project(xv, nf.x0);
        nf.c = axpy(-1.0, xproj, xv);
        // eta at phi = 1, x = c: eta(v) - b.xproj
        nf.p = v[g.i_eta()] - dot(nf.b, xproj);
    }
    nf.delta = dot(nf.b, nf.b) - dot(nf.c, nf.c) - 2.0 * nf.p;
    // residual of eta = p phi + b.x on the basis
    for (const auto& v : basis) {
        double pred = nf.p * v[g.i_phi()];
        for (std::size_t i = 0; i < m; ++i) pred += nf.b[i] * v[g.i_x(i)];
        nf.residual = std::max(nf.residual, std::fabs(pred - v[g.i_eta()]));
    }
    return nf;
}

/** \brief The SO(1,n) anchor vector e_2 - e_{n+1}. */
inline vec so1n_anchor(const group_spec& g) {
    vec a(g.d, 0.0);
    a[1] = 1.0;
    a[g.d - 2] = -1.0;
    return a;
}

/**
 * \brief g = diag(t, sqrt2/t, 1, ..., 1, t/sqrt2, 1/t) exp(Y_{c-b}) with t = sqrt(-delta).
 *
 * Conjugation by g sends h into the stabilizer of the anchor vector.
 * \throws domain_error when delta >= 0.
 */
inline mat so1n_conjugator(const group_spec& g, const so1n_normal_form& nf) {
    if (!(nf.delta < 0.0)) throw domain_error("SO(1,n) conjugator needs a negative discriminant");
    const double t = std::sqrt(-nf.delta);
    const double a1 = t;
    const double a2 = std::sqrt(2.0) / t;
    vec diag(g.d, 1.0);
    diag[0] = a1;
    diag[1] = a2;
    diag[g.d - 2] = 1.0 / a2;
    diag[g.d - 1] = 1.0 / a1;
    const vec w = axpy(-1.0, nf.b, nf.c);
    const vec y = so2n_coord(g, 0, 0, 0, vec(g.m(), 0.0), w, 0);
    return mat::diagonal(diag) * exp_nil(g, y);
}

} // namespace cartankit
