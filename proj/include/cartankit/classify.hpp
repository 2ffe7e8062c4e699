#pragma once

/**
 * \file classify.hpp
 * \brief Decision procedures for Cartan-decomposition subgroups of
 * SL(3,R) and SO(2,n) inside AN, with the predicted shape of mu(H).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "liealg.hpp"
#include "linalg.hpp"

namespace cartankit {

// ---------------------------------------------------------------------------
// shapes and verdicts

/** \brief s -> s^p (log s)^q. */
struct growth_fn {
    rational p;
    rational q;

    std::string str() const { return "(" + p.str() + "," + q.str() + ")"; }
    friend bool operator==(const growth_fn& a, const growth_fn& b) { return a.p == b.p && a.q == b.q; }
    friend bool operator!=(const growth_fn& a, const growth_fn& b) { return !(a == b); }
    friend bool operator<(const growth_fn& a, const growth_fn& b) {
        return a.p != b.p ? a.p < b.p : a.q < b.q;
    }
};

inline growth_fn growth(long p_num, long p_den, long q_num = 0, long q_den = 1) {
    return {rational(p_num, p_den), rational(q_num, q_den)};
}

enum class shape_kind { full_chamber, curve, band, cone_region, ray, ray_pair, log_curve };

inline std::string to_string(shape_kind k) {
    switch (k) {
    case shape_kind::full_chamber: return "FullChamber";
    case shape_kind::curve: return "Curve";
    case shape_kind::band: return "Band";
    case shape_kind::cone_region: return "ConeRegion";
    case shape_kind::ray: return "Ray";
    case shape_kind::ray_pair: return "RayPair";
    case shape_kind::log_curve: return "LogCurve";
    }
    return "?";
}

/**
 * \brief Predicted image mu(H) up to bounded distance.
 *
 * Curve and Band use lower/upper. A Ray inside N also carries the growth
 * of chi_2 against chi_1 in lower (a ray is the curve N2 ~ N1^p).
 * ConeRegion slopes are chi_2/chi_1 ratios of its bounding rays.
 */
struct mu_shape {
    shape_kind kind = shape_kind::full_chamber;
    growth_fn lower{rational(1), rational(0)};
    growth_fn upper{rational(2), rational(0)};
    vec direction;          ///< ray, ray pair, log curve: dominant lambda direction
    vec image;              ///< ray pair: opposition image; log curve: perpendicular ray in a
    int k = 0;              ///< log curve exponent
    double slope_lo = 0.0;  ///< cone region
    double slope_hi = 0.0;
    vec ray_lo, ray_hi;
    bool reflected = false;

    bool has_growth() const {
        return kind == shape_kind::curve || kind == shape_kind::band ||
               (kind == shape_kind::ray && !direction.empty() && lower.p.num != 0);
    }
    std::string str() const;
};

inline mu_shape full_chamber() { return {}; }

inline mu_shape curve(growth_fn f) {
    mu_shape s;
    s.kind = shape_kind::curve;
    s.lower = s.upper = f;
    return s;
}

inline mu_shape band(growth_fn lo, growth_fn hi) {
    mu_shape s;
    s.kind = shape_kind::band;
    s.lower = lo;
    s.upper = hi;
    return s;
}

namespace detail {
inline std::string vec_str(const vec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}
} // namespace detail

inline std::string mu_shape::str() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
    case shape_kind::full_chamber: break;
    case shape_kind::curve: os << lower.str(); break;
    case shape_kind::band: os << "(" << lower.str() << "," << upper.str() << ")"; break;
    case shape_kind::cone_region: os << "[" << slope_lo << "," << slope_hi << "]" << (reflected ? " reflected" : ""); break;
    case shape_kind::ray: os << detail::vec_str(direction); break;
    case shape_kind::ray_pair: os << detail::vec_str(direction) << "|" << detail::vec_str(image); break;
    case shape_kind::log_curve: os << detail::vec_str(direction) << " perp " << detail::vec_str(image) << " k=" << k; break;
    }
    return os.str();
}

enum class certainty { exact, probabilistic };

inline std::string to_string(certainty c) { return c == certainty::exact ? "exact" : "probabilistic"; }

/**
 * \brief Element backing an existential condition.
 *
 * condition is one of E1, E2, E3, E4 or "meets-root" (nonzero element
 * of h inside the root space root).
 */
struct witness {
    std::string condition;
    vec element;
    int root = -1;
};

struct verdict {
    bool is_cds = false;
    std::string rule;
    mu_shape shape;
    std::vector<witness> witnesses;
    certainty cert = certainty::exact;
    bool boundary = false;        ///< cone test decided on the boundary of the region
    standard_form form;           ///< witnesses live in form.basis coordinates
};

// ---------------------------------------------------------------------------
// coordinate predicates for SO2n elements of n

namespace detail {

inline double coord_scale(const vec& v) { return std::max(norm2(v), 1e-300); }

// rows (phi, x) and (0, y)
inline std::pair<vec, vec> pair_rows(const group_spec& g, const vec& v) {
    const std::size_t m = g.m();
    vec r1(m + 1, 0.0), r2(m + 1, 0.0);
    r1[0] = v[g.i_phi()];
    for (std::size_t k = 0; k < m; ++k) {
        r1[k + 1] = v[g.i_x(k)];
        r2[k + 1] = v[g.i_y(k)];
    }
    return {r1, r2};
}

inline vec wedge_rows(const vec& a, const vec& b) {
    vec w;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) w.push_back(a[i] * b[j] - a[j] * b[i]);
    return w;
}

// quadratic minor map M(v) = (phi,x) ^ (0,y)
inline vec minor_map(const group_spec& g, const vec& v) {
    const auto [r1, r2] = pair_rows(g, v);
    return wedge_rows(r1, r2);
}

inline double y_norm(const group_spec& g, const vec& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.m(); ++k) s += v[g.i_y(k)] * v[g.i_y(k)];
    return std::sqrt(s);
}

inline double x_norm(const group_spec& g, const vec& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.m(); ++k) s += v[g.i_x(k)] * v[g.i_x(k)];
    return std::sqrt(s);
}

} // namespace detail

/** \brief Q(v) = |x|^2 + 2 phi eta. */
inline double quadric_q(const group_spec& g, const vec& v) {
    const double xn = detail::x_norm(g, v);
    return xn * xn + 2.0 * v[g.i_phi()] * v[g.i_eta()];
}

/** \brief Polar form of quadric_q. */
inline double quadric_b(const group_spec& g, const vec& u, const vec& v) {
    double s = u[g.i_phi()] * v[g.i_eta()] + v[g.i_phi()] * u[g.i_eta()];
    for (std::size_t k = 0; k < g.m(); ++k) s += u[g.i_x(k)] * v[g.i_x(k)];
    return s;
}

/** \brief dim <(phi,x), (0,y)>, with relative tolerance. */
inline int pair_rank(const group_spec& g, const vec& v, double tol = 1e-9) {
    const auto [r1, r2] = detail::pair_rows(g, v);
    const double s = detail::coord_scale(v);
    const double n1 = norm2(r1), n2 = norm2(r2);
    const bool z1 = n1 <= tol * s, z2 = n2 <= tol * s;
    if (z1 && z2) return 0;
    if (z1 || z2) return 1;
    return norm2(detail::wedge_rows(r1, r2)) <= tol * n1 * n2 ? 1 : 2;
}

/** \brief Re-evaluates the defining predicate of a witness. */
inline bool recheck(const group_spec& g, const witness& w, double tol = 1e-9) {
    const vec& v = w.element;
    const double s = norm2(v);
    if (!(s > 0.0)) return false;
    if (w.condition == "meets-root") {
        if (w.root < 0) return false;
        double inside = 0.0;
        for (std::size_t i : g.roots.positive.at(static_cast<std::size_t>(w.root)).mask) inside += v[i] * v[i];
        return std::fabs(std::sqrt(inside) - s) <= tol * s;
    }
    if (!g.is_so2n()) return false;
    if (w.condition == "E1") return std::fabs(v[g.i_phi()]) > tol * s && detail::y_norm(g, v) > tol * s;
    if (w.condition == "E2") return pair_rank(g, v, tol) == 1;
    if (w.condition == "E3") return pair_rank(g, v, tol) == 2;
    if (w.condition == "E4") return detail::y_norm(g, v) <= tol * s && std::fabs(quadric_q(g, v)) <= tol * s * s;
    return false;
}

// ---------------------------------------------------------------------------
// existential sub-tests

/** \brief Result of an existential test; found == false with decided == false means undecided. */
struct search_result {
    bool found = false;
    bool decided = true;
    vec element;
};

namespace detail {

inline vec combine(const std::vector<vec>& basis, const vec& c, std::size_t width) {
    vec v(width, 0.0);
    for (std::size_t j = 0; j < basis.size(); ++j) v = axpy(c[j], basis[j], v);
    return v;
}

// orthonormal basis of {v in span(basis) : the listed coordinates vanish}
inline std::vector<vec> restrict_zero(const std::vector<vec>& basis, const std::vector<std::size_t>& coords,
                                      std::size_t width, double tol = 1e-10) {
    if (basis.empty()) return {};
    std::vector<vec> rows;
    for (std::size_t i : coords) {
        vec r(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) r[j] = basis[j][i];
        rows.push_back(r);
    }
    std::vector<vec> out;
    for (const auto& c : null_space(rows, basis.size(), tol)) out.push_back(combine(basis, c, width));
    return orth(out, width, tol);
}

inline std::vector<std::size_t> y_coords(const group_spec& g) {
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < g.m(); ++k) c.push_back(g.i_y(k));
    return c;
}

inline std::vector<std::size_t> x_coords(const group_spec& g) {
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < g.m(); ++k) c.push_back(g.i_x(k));
    return c;
}

// largest value of f over the basis vectors
template <class F>
std::pair<double, std::size_t> best_of(const std::vector<vec>& basis, F f) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double v = f(basis[i]);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best, arg};
}

// kernel vector of cos(th) A - sin(th) B (m x k, given as columns)
inline vec pencil_kernel(const std::vector<vec>& a_cols, const std::vector<vec>& b_cols, double th,
                         double* smin = nullptr) {
    const std::size_t k = a_cols.size();
    const std::size_t m = a_cols.empty() ? 0 : a_cols[0].size();
    mat l(std::max<std::size_t>(m, k), k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) l(i, j) = std::cos(th) * a_cols[j][i] - std::sin(th) * b_cols[j][i];
    const svd_result r = svd(l);
    if (smin) *smin = r.s[k - 1];
    vec c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = r.v(j, k - 1);
    return c;
}

} // namespace detail

/**
 * \brief Nonzero isotropic vector of Q on span(h0), if any.
 *
 * h0 must lie in {y = 0}; Q is restricted through its Gram matrix.
 */
inline search_result quadric_isotropy(const group_spec& g, const std::vector<vec>& h0) {
    search_result r;
    const auto onb = orth(h0, g.coord_dim);
    if (onb.empty()) return r;
    const std::size_t k = onb.size();
    mat gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = quadric_b(g, onb[i], onb[j]);
    const eigen_result e = sym_eigen(gram);
    double big = 0.0;
    for (double l : e.values) big = std::max(big, std::fabs(l));
    const double tol = 1e-10 * std::max(1.0, big);
    auto eigvec = [&](std::size_t c) {
        vec v(g.coord_dim, 0.0);
        for (std::size_t i = 0; i < k; ++i) v = axpy(e.vectors(i, c), onb[i], v);
        return v;
    };
    // kernel first, then a mixture of a positive and a negative direction
    for (std::size_t c = 0; c < k; ++c)
        if (std::fabs(e.values[c]) <= tol) {
            r.found = true;
            r.element = eigvec(c);
            return r;
        }
    const double lp = e.values.front();
    const double lm = e.values.back();
    if (lp > 0.0 && lm < 0.0) {
        r.found = true;
        r.element = axpy(std::sqrt(lp), eigvec(k - 1), vec(g.coord_dim, 0.0));
        r.element = axpy(std::sqrt(-lm), eigvec(0), r.element);
    }
    return r;
}

/** \brief E3: some element with dim <(phi,x),(0,y)> = 2, by polarization of the minor map. */
inline search_result independent_pair_exists(const group_spec& g, const std::vector<vec>& h) {
    search_result r;
    auto try_vec = [&](const vec& v) {
        if (pair_rank(g, v) == 2) {
            r.found = true;
            r.element = v;
            return true;
        }
        return false;
    };
    for (const auto& b : h)
        if (try_vec(b)) return r;
    // M(b_i) = 0 for all i, so M(b_i + b_j) is the polar form
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j)
            if (try_vec(axpy(1.0, h[i], h[j]))) return r;
    return r;
}

/** \brief True when the minor map vanishes identically on span(h). */
inline bool minors_vanish_identically(const group_spec& g, const std::vector<vec>& h) {
    return !independent_pair_exists(g, h).found;
}

/**
 * \brief E2: some element with dim <(phi,x),(0,y)> = 1.
 *
 * The parallel branch (phi = 0, x = c y, c != 0) is a pencil kernel problem.
 * It is solved exactly in dimension <= 2, by counting when the pencil is
 * rectangular, by polarization when x ^ y vanishes identically, and by
 * a scan over the pencil angle otherwise; a negative scan is undecided.
 */
inline search_result parallel_pair_exists(const group_spec& g, const std::vector<vec>& h_in) {
    search_result r;
    const std::size_t w = g.coord_dim;
    const auto h = orth(h_in, w);
    auto accept = [&](const vec& v) {
        if (pair_rank(g, v) == 1) {
            r.found = true;
            r.element = v;
            return true;
        }
        return false;
    };
    // (i) y = 0 and (phi, x) != 0
    const auto h0 = detail::restrict_zero(h, detail::y_coords(g), w);
    {
        const auto [val, i] = detail::best_of(h0, [&](const vec& v) { return std::hypot(v[g.i_phi()], detail::x_norm(g, v)); });
        if (val > 1e-9 && accept(h0[i])) return r;
    }
    // (ii) phi = x = 0 and y != 0
    std::vector<std::size_t> px = detail::x_coords(g);
    px.push_back(g.i_phi());
    const auto h1 = detail::restrict_zero(h, px, w);
    {
        const auto [val, i] = detail::best_of(h1, [&](const vec& v) { return detail::y_norm(g, v); });
        if (val > 1e-9 && accept(h1[i])) return r;
    }
    // (iii) phi = 0, x = c y with c != 0; drop the directions with x = y = 0
    auto wsp = detail::restrict_zero(h, {g.i_phi()}, w);
    {
        std::vector<std::size_t> xy = detail::x_coords(g);
        const auto ys = detail::y_coords(g);
        xy.insert(xy.end(), ys.begin(), ys.end());
        const auto k0 = detail::restrict_zero(wsp, xy, w);
        std::vector<vec> comp;
        for (const auto& v : wsp) comp.push_back(detail::reduce_mod(v, k0));
        wsp = orth(comp, w);
    }
    const std::size_t k = wsp.size();
    const std::size_t m = g.m();
    if (k == 0) return r;
    std::vector<vec> a_cols(k, vec(m)), b_cols(k, vec(m));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            a_cols[j][i] = wsp[j][g.i_x(i)];
            b_cols[j][i] = wsp[j][g.i_y(i)];
        }
    auto at_angle = [&](double th) { return accept(detail::combine(wsp, detail::pencil_kernel(a_cols, b_cols, th), w)); };
    if (k > m) {
        at_angle(std::atan(1.0));
        return r;
    }
    if (k == 1) {
        accept(wsp[0]);
        return r;
    }
    if (k == 2) {
        // 2x2 minors of cos A - sin B are binary quadratics in (cos, sin)
        std::vector<std::array<double, 3>> qs;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double a1i = a_cols[0][i], a1j = a_cols[0][j], a2i = a_cols[1][i], a2j = a_cols[1][j];
                const double b1i = b_cols[0][i], b1j = b_cols[0][j], b2i = b_cols[1][i], b2j = b_cols[1][j];
                qs.push_back({a1i * a2j - a1j * a2i, -(a1i * b2j + b1i * a2j - a1j * b2i - b1j * a2i),
                              b1i * b2j - b1j * b2i});
            }
        std::size_t lead = 0;
        double lead_norm = -1.0;
        for (std::size_t q = 0; q < qs.size(); ++q) {
            const double nq = std::hypot(qs[q][0], std::hypot(qs[q][1], qs[q][2]));
            if (nq > lead_norm) {
                lead_norm = nq;
                lead = q;
            }
        }
        if (lead_norm <= 1e-12) {
            at_angle(std::atan(1.0));
            return r;
        }
        // roots t = tan(theta) of c0 + c1 t + c2 t^2 (theta = pi/2 gives x = 0)
        const auto& q = qs[lead];
        std::vector<double> ts;
        if (std::fabs(q[2]) > 1e-14 * lead_norm) {
            const double disc = q[1] * q[1] - 4.0 * q[2] * q[0];
            if (disc >= -1e-12 * lead_norm * lead_norm) {
                const double sd = std::sqrt(std::max(disc, 0.0));
                ts.push_back((-q[1] + sd) / (2.0 * q[2]));
                ts.push_back((-q[1] - sd) / (2.0 * q[2]));
            }
        } else if (std::fabs(q[1]) > 1e-14 * lead_norm) {
            ts.push_back(-q[0] / q[1]);
        }
        for (double t : ts) {
            if (std::fabs(t) <= 1e-12) continue;
            bool common = true;
            for (const auto& qq : qs) {
                const double nq = std::hypot(qq[0], std::hypot(qq[1], qq[2]));
                common = common && std::fabs(qq[0] + qq[1] * t + qq[2] * t * t) <= 1e-9 * nq * (1.0 + t * t);
            }
            if (common && at_angle(std::atan(t))) return r;
        }
        return r;
    }
    // x ^ y = 0 on all of W: any element with x, y both nonzero
    bool xy_zero = true;
    for (std::size_t i = 0; i < k && xy_zero; ++i)
        for (std::size_t j = i; j < k && xy_zero; ++j) {
            const vec v = i == j ? wsp[i] : axpy(1.0, wsp[i], wsp[j]);
            vec xv(m), yv(m);
            for (std::size_t q = 0; q < m; ++q) {
                xv[q] = v[g.i_x(q)];
                yv[q] = v[g.i_y(q)];
            }
            xy_zero = norm2(detail::wedge_rows(xv, yv)) <= 1e-10 * (1.0 + norm2(v) * norm2(v));
        }
    if (xy_zero) {
        for (std::size_t i = 0; i < k; ++i)
            if (accept(wsp[i])) return r;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (accept(axpy(1.0, wsp[i], wsp[j]))) return r;
        return r;
    }
    // deterministic scan of the pencil angle with golden-section refinement
    const int grid = 720;
    const double pi = std::acos(-1.0);
    auto smin_at = [&](double th) {
        double s = 0.0;
        detail::pencil_kernel(a_cols, b_cols, th, &s);
        return s;
    };
    std::vector<double> vals(grid + 1);
    for (int i = 0; i <= grid; ++i) vals[i] = smin_at(pi * i / grid);
    for (int i = 1; i < grid; ++i) {
        if (!(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1])) continue;
        double lo = pi * (i - 1) / grid, hi = pi * (i + 1) / grid;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 80; ++it) {
            const double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
            if (smin_at(c) < smin_at(d)) hi = d;
            else lo = c;
        }
        const double th = 0.5 * (lo + hi);
        if (smin_at(th) <= 1e-9 && at_angle(th)) return r;
    }
    r.decided = false;
    return r;
}

// ---------------------------------------------------------------------------
// chamber geometry

/** \brief Weyl element w with w(toral) dominant, applied to another toral vector. */
inline vec weyl_apply_dominating(const group_spec& g, const vec& toral, const vec& other) {
    const std::size_t k = g.toral_dim;
    vec t(toral.begin(), toral.begin() + static_cast<std::ptrdiff_t>(k));
    vec o(other.begin(), other.begin() + static_cast<std::ptrdiff_t>(k));
    if (g.is_so2n())
        for (std::size_t i = 0; i < k; ++i)
            if (t[i] < 0.0) {
                t[i] = -t[i];
                o[i] = -o[i];
            }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t[a] > t[b]; });
    vec out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = o[idx[i]];
    return out;
}

/** \brief Representative of the Weyl orbit of a toral vector in the closed positive chamber. */
inline vec dominant(const group_spec& g, const vec& toral) { return weyl_apply_dominating(g, toral, toral); }

/** \brief chi_2 / chi_1 of a dominant lambda vector. */
inline double chi_slope(const vec& lambda) { return (lambda[0] + lambda[1]) / lambda[0]; }

namespace detail {

inline vec toral_of(const group_spec& g, const vec& v) {
    return vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(g.toral_dim));
}

inline vec unit(const vec& v) {
    const double n = norm2(v);
    vec u = v;
    for (auto& x : u) x /= n;
    return u;
}

// toral coordinates of [E, E^T] for a nilpotent coordinate vector
inline vec coroot_direction(const group_spec& g, const vec& nil) {
    const mat e = coord_to_matrix(g, nil);
    const mat et = e.transpose();
    const mat c = e * et - et * e;
    vec t(g.toral_dim);
    for (std::size_t i = 0; i < g.toral_dim; ++i) t[i] = c(i, i);
    return t;
}

// unit vector of a orthogonal to a given toral direction
inline vec perpendicular(const group_spec& g, const vec& a) {
    if (g.is_so2n()) return unit(vec{-a[1], a[0]});
    const vec one{1.0, 1.0, 1.0};
    return unit(vec{a[1] * one[2] - a[2] * one[1], a[2] * one[0] - a[0] * one[2], a[0] * one[1] - a[1] * one[0]});
}

inline double root_value(const positive_root& r, const vec& toral) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.functional.size(); ++i) s += r.functional[i] * toral[i];
    return s;
}

} // namespace detail

/** \brief Outcome of the root-semidirect cone test. */
struct cone_result {
    bool is_cds = false;
    bool boundary = false;
    mu_shape region;  ///< ConeRegion when not CDS
    vec t_plus;       ///< oriented unit ray of t
    vec a_plus;       ///< unit ray of a_omega
};

/**
 * \brief CDS test for h = t + u, u inside the root space u_omega, dim t = 1.
 *
 * t is given by its toral coordinates. The region is the open chamber
 * containing a_omega+ or, when a_omega+ lies on a wall, the open union of
 * the two chambers along it; points on its boundary count as CDS.
 */
inline cone_result cone_test(const group_spec& g, const vec& t, int omega) {
    if (omega < 0 || static_cast<std::size_t>(omega) >= g.roots.positive.size()) throw domain_error("cone_test: bad root");
    const vec tt = detail::toral_of(g, t);
    if (!(norm2(tt) > 0.0)) throw domain_error("cone_test: t must be nonzero");
    cone_result res;
    const auto& root = g.roots.positive[static_cast<std::size_t>(omega)];
    res.a_plus = detail::unit(detail::coroot_direction(g, unit_coord(g, root.mask.at(0))));
    res.t_plus = detail::unit(tt);
    if (dot(res.t_plus, res.a_plus) < 0.0)
        for (auto& x : res.t_plus) x = -x;
    bool inside = true;
    for (const auto& gam : g.roots.positive) {
        const double ga = detail::root_value(gam, res.a_plus);
        if (std::fabs(ga) <= 1e-12) continue;
        const double gt = detail::root_value(gam, res.t_plus);
        if (std::fabs(gt) <= 1e-10) {
            res.boundary = true;
            inside = false;
        } else if ((gt > 0) != (ga > 0)) {
            inside = false;
            res.boundary = false;
            break;
        }
    }
    res.is_cds = !inside;
    if (!inside) return res;
    // image of the cone bounded by t+ and its mirror across a_omega
    const vec s = detail::perpendicular(g, res.a_plus);
    const vec mirror = axpy(-2.0 * dot(res.t_plus, s), s, res.t_plus);
    mu_shape c;
    c.kind = shape_kind::cone_region;
    c.slope_lo = 1e300;
    c.slope_hi = -1e300;
    for (const vec& ray : {res.t_plus, mirror, res.a_plus}) {
        const vec d = dominant(g, ray);
        const double sl = chi_slope(d);
        if (sl < c.slope_lo) {
            c.slope_lo = sl;
            c.ray_lo = d;
        }
        if (sl > c.slope_hi) {
            c.slope_hi = sl;
            c.ray_hi = d;
        }
    }
    const vec ad = dominant(g, res.a_plus);
    c.reflected = norm2(axpy(-1.0, ad, res.a_plus)) > 1e-12;
    res.region = c;
    return res;
}

/** \brief p + q <= -max(p,q) or p + q >= -min(p,q). */
inline bool sl3_rootsemi_condition(double p, double q) {
    if (p == 0.0 && q == 0.0) throw domain_error("sl3_rootsemi_condition needs (p,q) != (0,0)");
    return p + q <= -std::max(p, q) || p + q >= -std::min(p, q);
}

// ---------------------------------------------------------------------------
// one-dimensional algebras

namespace detail {

inline bool is_zero_vec(const vec& v, double tol) { return max_abs(v) <= tol; }

inline bool only_coords(const vec& v, const std::vector<std::size_t>& allowed, double tol) {
    const double s = std::max(max_abs(v), 1e-300);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::find(allowed.begin(), allowed.end(), i) == allowed.end() && std::fabs(v[i]) > tol * s) return false;
    return true;
}

// Ray shape for an in-N line with chi_2 ~ p chi_1
inline mu_shape in_n_ray(const group_spec& g, growth_fn f) {
    mu_shape s;
    s.kind = shape_kind::ray;
    s.lower = s.upper = f;
    const double p = f.p.value();
    if (g.is_so2n()) s.direction = unit(vec{1.0, p - 1.0});
    else s.direction = unit(vec{1.0, 0.0, -1.0});
    return s;
}

} // namespace detail

/** \brief chi_2 growth of a nonzero element of n in SO2n. */
inline growth_fn so2n_line_growth(const group_spec& g, const vec& v) {
    const double s = detail::coord_scale(v);
    const bool phi = std::fabs(v[g.i_phi()]) > 1e-9 * s;
    const bool y = detail::y_norm(g, v) > 1e-9 * s;
    if (phi && y) return growth(3, 2);
    if (pair_rank(g, v) == 1 && (y || std::fabs(quadric_q(g, v)) > 1e-9 * s * s)) return growth(1, 1);
    return growth(2, 1);
}

/** \brief mu(H) for a one-dimensional h = R v. */
inline mu_shape dim1_shape(const group_spec& g, const vec& v) {
    const double tscale = toral_size(g, v);
    const double nscale = nil_size(g, v);
    if (!(tscale > 0.0) && !(nscale > 0.0)) throw domain_error("dim1_shape needs a nonzero element");
    if (tscale <= 1e-12 * nscale) {
        if (g.is_so2n()) return detail::in_n_ray(g, so2n_line_growth(g, v));
        return detail::in_n_ray(g, growth(1, 1));
    }
    const split_element sp = split_jordan(g, v);
    const vec t = detail::toral_of(g, v);
    if (nil_size(g, sp.nil) <= 1e-12 * tscale) {
        mu_shape s;
        s.kind = shape_kind::ray_pair;
        s.direction = detail::unit(dominant(g, t));
        vec neg = t;
        for (auto& x : neg) x = -x;
        s.image = detail::unit(dominant(g, neg));
        return s;
    }
    mu_shape s;
    s.kind = shape_kind::log_curve;
    s.direction = detail::unit(dominant(g, t));
    // n_c^j != 0 for j <= k
    const mat nm = coord_to_matrix(g, sp.nil);
    mat p = nm;
    int k = 0;
    while (max_abs_norm(p) > 1e-12 * max_abs_norm(nm) && k < static_cast<int>(g.d)) {
        ++k;
        p = p * nm;
    }
    s.k = k;
    // perpendicular ray, oriented towards the coroot direction of n_c moved by the same Weyl element
    const vec perp = detail::perpendicular(g, s.direction);
    const vec cr = weyl_apply_dominating(g, t, detail::coroot_direction(g, sp.nil));
    s.image = dot(perp, cr) < 0.0 ? axpy(-2.0, perp, perp) : perp;
    return s;
}

// ---------------------------------------------------------------------------
// classifiers

namespace detail {

inline verdict cds(std::string rule) {
    verdict v;
    v.is_cds = true;
    v.rule = std::move(rule);
    v.shape = full_chamber();
    return v;
}

inline verdict not_cds(std::string rule, mu_shape s) {
    verdict v;
    v.is_cds = false;
    v.rule = std::move(rule);
    v.shape = std::move(s);
    return v;
}

// name of the root-like functional vanishing on the toral vector t, or ""
inline std::string kernel_name(const group_spec& g, const vec& t) {
    const vec tt = unit(toral_of(g, t));
    for (const auto& r : g.roots.positive)
        if (std::fabs(root_value(r, tt)) <= 1e-9) return r.name;
    // alpha - beta
    const double amb = g.is_so2n() ? tt[0] - 2.0 * tt[1] : tt[0] - 2.0 * tt[1] + tt[2];
    if (std::fabs(amb) <= 1e-9) return "alpha-beta";
    return "";
}

inline bool vanishes_on(const std::vector<vec>& u, const std::vector<std::size_t>& coords, double tol = 1e-9) {
    for (const auto& v : u) {
        const double s = coord_scale(v);
        for (std::size_t i : coords)
            if (std::fabs(v[i]) > tol * s) return false;
    }
    return true;
}

// root index whose space contains all of u, or -1
inline int single_root_space(const group_spec& g, const std::vector<vec>& u) {
    for (std::size_t r = 0; r < g.roots.positive.size(); ++r) {
        bool all = true;
        for (const auto& v : u) all = all && only_coords(v, g.roots.positive[r].mask, 1e-9);
        if (all) return static_cast<int>(r);
    }
    return -1;
}

inline std::vector<std::size_t> mask_of(const group_spec& g, const std::string& root) {
    return g.roots.positive[g.roots.index_of(root)].mask;
}

inline std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline bool span_contains(const std::vector<vec>& span, const vec& v, double tol = 1e-9) {
    return distance_to_span(unit(v), orth(span, v.size())) <= tol;
}

inline std::vector<vec> root_axes(const group_spec& g, const std::string& root) {
    std::vector<vec> out;
    for (std::size_t i : mask_of(g, root)) out.push_back(unit_coord(g, i));
    return out;
}

inline bool meets(const group_spec& g, const std::vector<vec>& u, const std::string& root) {
    return !intersect(u, root_axes(g, root), g.coord_dim, 1e-9).empty();
}

inline bool is_abelian(const group_spec& g, const std::vector<vec>& basis) {
    double scale = 0.0;
    for (const auto& b : basis) scale = std::max(scale, max_abs(b));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            if (max_abs(bracket(g, basis[i], basis[j])) > 1e-9 * std::max(1.0, scale * scale)) return false;
    return true;
}

} // namespace detail

/** \brief SO2n, h inside n, dim h >= 2. */
inline verdict classify_so2n_in_n(const group_spec& g, const std::vector<vec>& h_in) {
    if (!g.is_so2n()) throw domain_error("classify_so2n_in_n needs SO(2,n)");
    const std::size_t w = g.coord_dim;
    const auto h = orth(h_in, w);
    if (h.size() <= 1) {
        if (h.empty()) throw domain_error("empty subalgebra");
        return detail::not_cds("HinN-notCDS(1)", dim1_shape(g, h[0]));
    }
    const bool eta_in = detail::span_contains(h, unit_coord(g, g.i_eta()));
    const bool phi_zero = detail::vanishes_on(h, {g.i_phi()});
    const bool y_zero = detail::vanishes_on(h, detail::y_coords(g));

    // E1: phi and y both nonzero somewhere iff neither vanishes identically
    if (h.size() == 2 && eta_in && !phi_zero && !y_zero) {
        witness e1{"E1", {}, -1};
        for (const vec& c : {h[0], h[1], axpy(1.0, h[0], h[1]), axpy(-1.0, h[0], h[1])}) {
            e1.element = c;
            if (recheck(g, e1)) break;
        }
        verdict v = detail::cds("SO2n-HinN-CDS(1)");
        v.witnesses.push_back(e1);
        return v;
    }
    const search_result e2 = parallel_pair_exists(g, h);
    const search_result e3 = independent_pair_exists(g, h);
    const search_result e4 = quadric_isotropy(g, detail::restrict_zero(h, detail::y_coords(g), w));
    if (e2.found && (e3.found || e4.found)) {
        verdict v = detail::cds("SO2n-HinN-CDS(2)");
        v.witnesses.push_back({"E2", e2.element, -1});
        if (e3.found) v.witnesses.push_back({"E3", e3.element, -1});
        else v.witnesses.push_back({"E4", e4.element, -1});
        return v;
    }
    const certainty cert = (!e2.found && !e2.decided) ? certainty::probabilistic : certainty::exact;
    verdict v;
    if (phi_zero && !e2.found) {
        v = detail::not_cds("HinN-notCDS(2)", curve(growth(2, 1)));
    } else if (phi_zero && !e3.found && !eta_in) {
        v = detail::not_cds("HinN-notCDS(3)", curve(growth(1, 1)));
    } else if (y_zero && !eta_in && so1n_normal_form_of(g, h).delta < 0.0) {
        v = detail::not_cds("HinN-notCDS(4)", curve(growth(1, 1)));
    } else {
        throw defect_error("subalgebra of n matched no case (E2=" + std::to_string(e2.found) +
                           ", E3=" + std::to_string(e3.found) + ", E4=" + std::to_string(e4.found) + ")");
    }
    v.cert = cert;
    return v;
}

/** \brief SO2n, h = t + U with [t, U] inside U, dim t = 1, U != 0. */
inline verdict classify_so2n_semidirect(const group_spec& g, const vec& t, const std::vector<vec>& u_in) {
    const std::size_t w = g.coord_dim;
    const auto u = orth(u_in, w);
    if (u.empty()) {
        verdict v = detail::not_cds("SO2n-semi-notCDS(1)", dim1_shape(g, t));
        return v;
    }
    certainty cert = certainty::exact;
    if (u.size() >= 2) {
        verdict un = classify_so2n_in_n(g, u);
        if (un.is_cds) {
            un.rule = "SO2n-semiprod(2)";
            return un;
        }
        cert = un.cert;
    }
    const std::string ker = detail::kernel_name(g, t);
    const auto ys = detail::y_coords(g);
    const auto xs = detail::x_coords(g);
    const bool phi_zero = detail::vanishes_on(u, {g.i_phi()});
    const bool eta_zero = detail::vanishes_on(u, {g.i_eta()});
    const bool y_zero = detail::vanishes_on(u, ys);
    const bool x_zero = detail::vanishes_on(u, xs);
    const bool eta_in = detail::span_contains(u, unit_coord(g, g.i_eta()));
    bool q_zero = true;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i; j < u.size(); ++j)
            q_zero = q_zero && std::fabs(quadric_b(g, u[i], u[j])) <= 1e-9;
    // x ^ y on U (phi = 0 there when used)
    bool xy_parallel = true;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i; j < u.size(); ++j) {
            const vec v = i == j ? u[i] : axpy(1.0, u[i], u[j]);
            vec xv(g.m()), yv(g.m());
            for (std::size_t q = 0; q < g.m(); ++q) {
                xv[q] = v[g.i_x(q)];
                yv[q] = v[g.i_y(q)];
            }
            xy_parallel = xy_parallel && norm2(detail::wedge_rows(xv, yv)) <= 1e-9 * std::max(1.0, dot(v, v));
        }

    if (ker == "alpha" && phi_zero && eta_zero && xy_parallel) return detail::cds("SO2n-semiprod(3)");
    if (ker == "beta" && y_zero && q_zero) return detail::cds("SO2n-semiprod(4)");
    const int root = detail::single_root_space(g, u);
    cone_result cr;
    if (root >= 0) {
        cr = cone_test(g, t, root);
        if (cr.is_cds) {
            verdict v = detail::cds("SO2n-semiprod(5)");
            v.boundary = cr.boundary;
            return v;
        }
    }
    verdict v;
    v.cert = cert;
    if (ker == "alpha" && phi_zero) {
        const search_result e2 = parallel_pair_exists(g, u);
        if (!e2.found) {
            v = detail::not_cds("SO2n-semi-notCDS(2)", curve(growth(2, 1)));
            if (!e2.decided) v.cert = certainty::probabilistic;
            return v;
        }
    }
    if (ker == "beta" && phi_zero && y_zero && !eta_in) return detail::not_cds("SO2n-semi-notCDS(3)", curve(growth(1, 1)));
    if (ker == "alpha+beta" && phi_zero && x_zero && !eta_in) return detail::not_cds("SO2n-semi-notCDS(4)", curve(growth(1, 1)));
    if (ker == "beta" && y_zero && !eta_in && so1n_normal_form_of(g, u).delta < 0.0)
        return detail::not_cds("SO2n-semi-notCDS(5)", curve(growth(1, 1)));
    if (ker == "alpha-beta" && u.size() == 1 && x_zero && eta_zero && !phi_zero && !y_zero)
        return detail::not_cds("SO2n-semi-notCDS(6)", curve(growth(3, 2)));
    if (ker == "beta" && u.size() == 1 && y_zero && std::fabs(quadric_q(g, u[0])) > 1e-9)
        return detail::not_cds("SO2n-semi-notCDS(7)", curve(growth(1, 1)));
    if (root >= 0) {
        v = detail::not_cds("SO2n-semi-notCDS(8)", cr.region);
        return v;
    }
    throw defect_error("semidirect algebra matched no case (T kernel '" + ker + "', dim U " + std::to_string(u.size()) + ")");
}

/** \brief SO2n graph form h = R(t + psi) + U, psi in u_omega, omega(t) = 0. */
inline verdict classify_so2n_graph(const group_spec& g, const standard_form& sf) {
    const auto& u = sf.u_basis;
    if (u.empty()) return detail::not_cds("dim>Rrank", dim1_shape(g, sf.basis.at(0)));
    certainty cert = certainty::exact;
    if (u.size() >= 2) {
        verdict un = classify_so2n_in_n(g, u);
        if (un.is_cds) {
            un.rule = "SO2n-notsemi-CDS";
            return un;
        }
        cert = un.cert;
    }
    const std::string om = g.roots.positive.at(static_cast<std::size_t>(sf.omega)).name;
    const std::string a2b = "alpha+2beta";
    auto inside = [&](const std::vector<std::size_t>& coords) {
        for (const auto& v : u)
            if (!detail::only_coords(v, coords, 1e-9)) return false;
        return true;
    };
    auto mask = [&](const std::string& r) { return detail::mask_of(g, r); };
    const bool om_bab = om == "beta" || om == "alpha+beta";
    if (om_bab && detail::is_abelian(g, sf.basis) && detail::meets(g, u, om)) {
        bool within = true;
        const auto allowed = detail::concat(mask(om), mask(a2b));
        for (const auto& b : sf.basis) within = within && detail::only_coords(nil_part(g, b), allowed, 1e-9);
        if (within) {
            verdict v = detail::cds("SO2n-notsemi-CDS");
            const auto meet = intersect(u, detail::root_axes(g, om), g.coord_dim, 1e-9);
            v.witnesses.push_back({"meets-root", meet.at(0), static_cast<int>(g.roots.index_of(om))});
            v.cert = cert;
            return v;
        }
    }
    auto nc = [&](int item, mu_shape s) {
        verdict v = detail::not_cds("SO2n-notsemi-notCDS(" + std::to_string(item) + ")", std::move(s));
        v.cert = cert;
        return v;
    };
    const bool u_is_a2b = u.size() == 1 && inside(mask(a2b));
    if (om == "alpha" && inside(mask("alpha+beta"))) return nc(1, band(growth(1, 1), growth(2, 1, -1)));
    if (om == "alpha" && inside(mask(a2b))) return nc(2, band(growth(2, 1, -2), growth(2, 1)));
    if (om == a2b && inside(mask("alpha"))) return nc(3, band(growth(2, 1, -2), growth(2, 1)));
    if (om == a2b && (inside(mask("beta")) || inside(mask("alpha+beta")))) return nc(4, band(growth(1, 1), growth(2, 1, -1)));
    if (om_bab) {
        const std::string gam = om == "beta" ? "alpha+beta" : "beta";
        if (u_is_a2b) return nc(7, band(growth(1, 1, 1), growth(2, 1)));
        if (inside(detail::concat(mask(om), mask(a2b))) && !detail::meets(g, u, om) && !detail::meets(g, u, a2b))
            return nc(5, band(growth(1, 1), growth(3, 2)));
        if (inside(detail::concat(mask(gam), mask(a2b))) && !detail::meets(g, u, a2b))
            return nc(6, band(growth(1, 1), growth(1, 1, 2)));
    }
    if (om == "alpha+beta" && u.size() == 1 && inside(mask("alpha"))) return nc(8, band(growth(1, 1, 1), growth(2, 1)));
    throw defect_error("graph algebra matched no case (omega " + om + ", dim U " + std::to_string(u.size()) + ")");
}

/** \brief SL3 classification of a standardized algebra of dimension 2. */
inline verdict classify_sl3(const group_spec& g, const standard_form& sf) {
    const std::size_t dim = sf.basis.size();
    if (dim >= 3) return detail::cds("SL3-CDS(1)");
    if (sf.kind == form_kind::graph) return detail::not_cds("SL3notCDS(4)", band(growth(1, 2, 1, 2), growth(2, 1, -1)));
    if (sf.kind == form_kind::contains_a || sf.t_basis.size() == 2) return detail::cds(dim == 2 ? "SL3-CDS(2)" : "SL3-CDS(1)");
    const double tol = 1e-9;
    if (sf.kind == form_kind::inside_n) {
        // span{a u1 + b u2, u3}
        const auto q = orth(sf.u_basis, g.coord_dim);
        const auto top = detail::restrict_zero(q, {5}, g.coord_dim);
        const vec v = top.at(0);
        const double s = detail::coord_scale(v);
        if (std::fabs(v[3]) > tol * s && std::fabs(v[4]) > tol * s) return detail::cds("SL3-CDS(3)");
        return detail::not_cds("SL3notCDS(2)", curve(growth(1, 1)));
    }
    const vec& t = sf.t_basis.at(0);
    const auto u = orth(sf.u_basis, g.coord_dim);
    const int root = detail::single_root_space(g, u);
    if (root >= 0) {
        const cone_result cr = cone_test(g, t, root);
        if (cr.is_cds) {
            verdict v = detail::cds("SL3-CDS(6)");
            v.boundary = cr.boundary;
            return v;
        }
        return detail::not_cds("SL3notCDS(5)", cr.region);
    }
    const vec& uv = u.at(0);
    const double s = detail::coord_scale(uv);
    const bool a = std::fabs(uv[3]) > tol * s, b = std::fabs(uv[4]) > tol * s, c = std::fabs(uv[5]) > tol * s;
    const std::string ker = detail::kernel_name(g, t);
    if (ker == "alpha" && !a && b && c) return detail::cds("SL3-CDS(4)");
    if (ker == "beta" && a && !b && c) return detail::cds("SL3-CDS(5)");
    if (ker == "alpha-beta" && a && b && !c) return detail::not_cds("SL3notCDS(3)", curve(growth(1, 1)));
    throw defect_error("SL3 semidirect algebra matched no case");
}

/**
 * \brief Full classification of a subalgebra of a + n.
 * \throws not_subalgebra_error, nonstandard_error, defect_error
 */
inline verdict classify(const group_spec& g, const std::vector<vec>& basis) {
    const subalgebra_check chk = check_subalgebra(g, basis);
    if (!chk.ok) throw not_subalgebra_error(chk.reason);
    const auto h = orth(basis, g.coord_dim);
    const parts p = decompose_parts(g, h);
    if (p.t.size() == 2) {
        verdict v;
        if (g.is_so2n()) v = detail::cds(p.h_a.size() == 2 ? "SO2n-semiprod(1)" : "HN=AN");
        else v = detail::cds(h.size() >= 3 ? "SL3-CDS(1)" : "SL3-CDS(2)");
        v.form = to_standard_form(g, h);
        return v;
    }
    if (h.size() <= 1) {
        verdict v;
        const vec& x = h.at(0);
        const bool in_n = toral_size(g, x) <= 1e-12 * nil_size(g, x);
        if (!g.is_so2n()) v = detail::not_cds("SL3notCDS(1)", dim1_shape(g, x));
        else if (in_n) v = detail::not_cds("HinN-notCDS(1)", dim1_shape(g, x));
        else {
            const mu_shape s = dim1_shape(g, x);
            v = detail::not_cds(s.kind == shape_kind::ray_pair ? "SO2n-semi-notCDS(1)" : "dim>Rrank", s);
        }
        v.form.kind = in_n ? form_kind::inside_n : form_kind::semidirect;
        v.form.basis = h;
        v.form.conjugator = mat::identity(g.d);
        return v;
    }
    if (!g.is_so2n() && h.size() >= 3) {
        verdict v = detail::cds("SL3-CDS(1)");
        v.form = to_standard_form(g, h);
        return v;
    }
    const standard_form sf = to_standard_form(g, h);
    verdict v;
    if (!g.is_so2n()) v = classify_sl3(g, sf);
    else if (sf.kind == form_kind::inside_n) v = classify_so2n_in_n(g, sf.basis);
    else if (sf.kind == form_kind::semidirect) v = classify_so2n_semidirect(g, sf.t_basis.at(0), sf.u_basis);
    else v = classify_so2n_graph(g, sf);
    v.form = sf;
    return v;
}

// ---------------------------------------------------------------------------
// catalogs

struct catalog_entry {
    std::string name;
    std::vector<vec> basis;
    bool expected_cds = true;
    bool metadata_only = false;  ///< listed for completeness, outside a + n
    std::string note;
};

/** \brief Minimal Cartan-decomposition subalgebras up to conjugacy. */
inline std::vector<catalog_entry> catalog_minimal(const group_spec& g) {
    std::vector<catalog_entry> out;
    if (!g.is_so2n()) {
        out.push_back({"A", {sl3_coord(1, -1, 0, 0, 0, 0), sl3_coord(0, 1, -1, 0, 0, 0)}, true, false, ""});
        out.push_back({"N-plane", {sl3_coord(0, 0, 0, 1, 1, 0), sl3_coord(0, 0, 0, 0, 0, 1)}, true, false, ""});
        out.push_back({"graph-3dim",
                       {sl3_coord(1, 1, -2, 1, 0, 0), sl3_coord(0, 0, 0, 0, 1, 0), sl3_coord(0, 0, 0, 0, 0, 1)},
                       true, false, ""});
        out.push_back({"root-semi(1,1)", {sl3_coord(1, 1, -2, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0)}, true, false, ""});
        out.push_back({"root-semi(1,-1/2)", {sl3_coord(1, -0.5, -0.5, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0)}, true, false, ""});
        out.push_back({"rotation", {}, true, true, "rotation family, outside AN"});
        return out;
    }
    const std::size_t m = g.m();
    auto e = [&](std::size_t k) {
        vec v(m, 0.0);
        v[k] = 1.0;
        return v;
    };
    const vec z(m, 0.0);
    const int n = g.n;
    for (int eps : {0, 1}) {
        out.push_back({"type1 eps1=" + std::to_string(eps),
                       {so2n_coord(g, 0, 0, 1, z, eps ? e(0) : z, 0), so2n_coord(g, 0, 0, 0, z, z, 1)}, true, false, ""});
    }
    for (int eps : {0, 1}) {
        if (n == 3 && eps == 1) continue;
        const std::size_t slot = n >= 4 ? 1 : 0;
        out.push_back({"type2 eps2=" + std::to_string(eps),
                       {so2n_coord(g, 0, 0, 1, z, eps ? e(slot) : z, 0), so2n_coord(g, 0, 0, 0, e(0), z, 0)}, true,
                       false, ""});
    }
    if (n >= 4) {
        for (int eps : {0, 1}) {
            if (n == 4 && eps == 1) continue;
            vec x3 = z;
            if (eps) x3[2] = 1.0;
            out.push_back({"type3 eps3=" + std::to_string(eps),
                           {so2n_coord(g, 0, 0, 0, e(0), z, 0), so2n_coord(g, 0, 0, 0, x3, e(1), 0)}, true, false, ""});
        }
    }
    return out;
}

} // namespace cartankit
