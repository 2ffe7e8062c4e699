#pragma once

/**
 * \file empirical.hpp
 * \brief Cartan-projection clouds of sampled subgroups, the two-wall test,
 * band checks against predicted shapes, and cross-checks built on them.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <quadmath.h>

#include "classify.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "liealg.hpp"
#include "linalg.hpp"

namespace cartankit {

/** \brief Calibration constants; the defaults are the documented ones. */
struct tolerances {
    double wall_tol = 0.05;
    double q_tol = 0.3;
    double c_max = 1e3;
    double wall_margin = 0.1;
};

// ---------------------------------------------------------------------------
// clouds

struct mu_sample {
    std::size_t id = 0;
    int bin = -1; ///< floor(logN1) for 1 <= logN1 < max radius, else -1
    double logN1 = 0.0;
    double logN2 = 0.0;
    double logS1 = 0.0;
    double logS12 = 0.0;
};

struct mu_cloud {
    group_spec spec;
    std::vector<mu_sample> samples;
    double max_log_radius = 40.0;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    std::vector<std::size_t> bin_counts; ///< index b counts samples with floor(logN1) = b
    bool partial = false;
    std::size_t skipped = 0; ///< draws that left the representable range
    std::string schedule = "sweep/mixture/pair/line/root-cut+wall-seek";

    double min_radius() const {
        double r = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) r = std::min(r, s.logN1);
        return r;
    }
    double max_radius() const {
        double r = -std::numeric_limits<double>::infinity();
        for (const auto& s : samples) r = std::max(r, s.logN1);
        return r;
    }
};

/** \brief Cloud in the fixed CSV layout. */
inline void write_cloud_csv(std::ostream& os, const mu_cloud& c) {
    os << "sample_id,bin,logN1,logN2,logS1,logS12\n";
    os.precision(17);
    for (const auto& s : c.samples)
        os << s.id << "," << s.bin << "," << s.logN1 << "," << s.logN2 << "," << s.logS1 << "," << s.logS12 << "\n";
}

/** \brief Worker count: hardware concurrency capped by CARTANKIT_THREADS. */
inline unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* e = std::getenv("CARTANKIT_THREADS")) {
        const long cap = std::strtol(e, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// coefficient giving exp(c X) a log-size of about l
struct factor_scale {
    double toral = 0.0; // max |toral eigenvalue|
    int degree = 0;     // nilpotency degree of the nil part
    double lead = 1.0;  // |n^k| / k!
};

inline factor_scale scale_of(const group_spec& g, const split_element& f) {
    factor_scale s;
    for (double t : f.toral) s.toral = std::max(s.toral, std::fabs(t));
    const mat nm = coord_to_matrix(g, f.nil);
    const double n0 = max_abs_norm(nm);
    if (n0 > 0.0) {
        mat p = nm;
        double fact = 1.0;
        while (s.degree < static_cast<int>(g.d)) {
            const double np = max_abs_norm(p);
            if (!(np > 1e-12 * std::pow(n0, s.degree + 1))) break;
            ++s.degree;
            fact *= s.degree;
            s.lead = np / fact;
            p = p * nm;
        }
    }
    return s;
}

inline double coefficient_for(const factor_scale& s, double l) {
    if (s.toral > 0.0) return l / s.toral;
    if (s.degree == 0) return 0.0;
    return std::exp((l - std::log(s.lead)) / s.degree);
}

// factors of a plan in both multiplication orders
struct plan_pair {
    sample_plan plan;
    std::vector<factor_scale> scales;
    sample_plan reversed;
    std::vector<factor_scale> reversed_scales;
};

inline plan_pair make_plan_pair(const group_spec& g, const std::vector<vec>& basis) {
    plan_pair p{make_sample_plan(g, basis), {}, make_sample_plan(g, {basis.rbegin(), basis.rend()}), {}};
    for (const auto& f : p.plan.factors) p.scales.push_back(scale_of(g, f));
    for (const auto& f : p.reversed.factors) p.reversed_scales.push_back(scale_of(g, f));
    return p;
}

struct sampler {
    plan_pair full;
    std::vector<plan_pair> subs; // h cut by sums of root spaces, with or without a
    std::vector<sample_plan> lines; // one-parameter subgroups of random directions
    std::vector<std::vector<factor_scale>> line_scales;
};

// distinct proper nonzero subspaces h cap V, V a sum of root spaces (plus a or not)
inline std::vector<std::vector<vec>> root_cuts(const group_spec& g, const std::vector<vec>& basis) {
    std::vector<std::vector<vec>> out;
    const std::size_t nr = g.roots.positive.size();
    const std::size_t dim = basis.size();
    for (int with_a = 0; with_a < 2; ++with_a)
        for (std::size_t mask = 1; mask < (std::size_t{1} << nr); ++mask) {
            std::vector<vec> coords;
            if (with_a)
                for (std::size_t k = 0; k < g.toral_dim; ++k) {
                    coords.push_back(zero_coord(g));
                    coords.back()[k] = 1.0;
                }
            for (std::size_t r = 0; r < nr; ++r)
                if (mask & (std::size_t{1} << r))
                    for (std::size_t i : g.roots.positive[r].mask) {
                        coords.push_back(zero_coord(g));
                        coords.back()[i] = 1.0;
                    }
            auto cut = intersect(basis, coords, g.coord_dim, 1e-9);
            if (cut.empty() || cut.size() >= dim) continue;
            bool seen = false;
            for (const auto& o : out) {
                if (o.size() != cut.size()) continue;
                auto both = o;
                both.insert(both.end(), cut.begin(), cut.end());
                if (rank(both, g.coord_dim, 1e-9) == o.size()) seen = true;
            }
            if (!seen) out.push_back(std::move(cut));
        }
    return out;
}

inline sampler make_sampler(const group_spec& g, const std::vector<vec>& basis, std::uint64_t seed) {
    sampler s{make_plan_pair(g, basis), {}, {}, {}};
    for (const auto& cut : root_cuts(g, basis)) s.subs.push_back(make_plan_pair(g, cut));
    std::mt19937_64 rng(splitmix(seed ^ 0x5bd1e995ULL));
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::size_t nlines = basis.size() > 1 ? 8 : 0;
    for (std::size_t i = 0; i < nlines; ++i) {
        vec v = zero_coord(g);
        for (const auto& b : basis) v = axpy(nd(rng), b, v);
        s.lines.push_back(make_sample_plan(g, {v}));
        s.line_scales.push_back({scale_of(g, s.lines.back().factors[0])});
    }
    return s;
}

inline bool eval_profile(const sample_plan& plan, const std::vector<factor_scale>& sc, const vec& logsize,
                         const std::vector<int>& sign, double lam, log_profile& out) {
    std::vector<quad> c(logsize.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        c[j] = sign[j] * static_cast<quad>(coefficient_for(sc[j], lam * logsize[j]));
    try {
        out = profile_of<quad>(group_sample_element<quad>(plan, c));
    } catch (const overflow_error&) {
        return false;
    }
    return std::isfinite(out.logN1) && std::isfinite(out.logS12);
}

// signed log-size w -> coefficient, continuous through 0; quad so that
// cancellations between coefficients near e^80 stay resolvable
inline quad signed_coefficient(const factor_scale& s, quad w) {
    if (s.toral > 0.0) return w / static_cast<quad>(s.toral);
    if (s.degree == 0) return 0;
    const quad a = w < 0 ? -w : w;
    const quad lead = static_cast<quad>(std::log(s.lead)) / s.degree;
    const quad c = expq(a / s.degree - lead) - expq(-lead);
    return w < 0 ? -c : c;
}

using qvec = std::vector<quad>;

inline bool eval_signed(const sample_plan& plan, const std::vector<factor_scale>& sc, const qvec& w, log_profile& out) {
    std::vector<quad> c(w.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = signed_coefficient(sc[j], w[j]);
    try {
        out = profile_of<quad>(group_sample_element<quad>(plan, c));
    } catch (const overflow_error&) {
        return false;
    }
    return std::isfinite(out.logN1) && std::isfinite(out.logS12);
}

/*
 * Coordinate descent on the signed log-sizes towards the wall chi_2 = k chi_1:
 * a scan per coordinate over local steps and absolute scales, then golden
 * section around the best point down to quad resolution. Cancellations between factors show up as
 * narrow log-shaped valleys, which the golden step resolves. A cancellation
 * lowers the radius, so after each sweep the log-sizes are rescaled towards
 * the target band [r_lo, r_hi] and the next sweep re-tunes them.
 */
inline bool seek_wall(const sample_plan& plan, const std::vector<factor_scale>& sc, qvec w, double k, double r_lo,
                      double r_hi, log_profile& best) {
    auto score = [&](const qvec& x, log_profile& p) {
        if (!eval_signed(plan, sc, x, p)) return 1e300;
        return std::fabs(p.logS12 / std::max(p.logS1, 1e-9) - k) + 10.0 * std::max(0.0, p.logN1 - 1.02 * r_hi);
    };
    double fbest = score(w, best);
    if (fbest >= 1e300) return false;
    const quad phi = (sqrtq(5) - 1) / 2;
    const double r_mid = 0.5 * (r_lo + r_hi);
    for (int sweep = 0; sweep < 6; ++sweep) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (fbest < 1e-6 && best.logN1 >= r_lo && best.logN1 <= r_hi) break;
            const quad w0 = w[j];
            const quad step = std::max<quad>(0.5, 0.05 * fabsq(w0));
            quad bj = w0;
            // local steps, then absolute scales 0, +-2^k so coordinates can jump between scales
            std::vector<quad> cand;
            for (int t = -6; t <= 6; ++t)
                if (t != 0) cand.push_back(w0 + step * t);
            cand.push_back(0);
            for (quad v = 0.5; v <= 2 * r_hi; v *= 2) {
                cand.push_back(v);
                cand.push_back(-v);
            }
            for (const quad cv : cand) {
                qvec x = w;
                x[j] = cv;
                log_profile p;
                const double f = score(x, p);
                if (f < fbest) {
                    fbest = f;
                    best = p;
                    bj = x[j];
                }
            }
            // golden section, one new evaluation per step
            const quad half = std::max<quad>(step, fabsq(bj) / 2);
            quad a = bj - half, b = bj + half;
            const quad stop = static_cast<quad>(1e-22) * std::max<quad>(1, fabsq(bj));
            quad c1 = b - phi * (b - a), c2 = a + phi * (b - a);
            auto at = [&](quad t) {
                qvec x = w;
                x[j] = t;
                log_profile p;
                const double f = score(x, p);
                if (f < fbest) {
                    fbest = f;
                    best = p;
                    bj = t;
                }
                return f;
            };
            double f1 = at(c1), f2 = at(c2);
            double f_back = fbest;
            for (int it = 0; it < 160 && b - a > stop; ++it) {
                // a valley keeps improving; a plateau does not
                if (it % 20 == 19) {
                    if (f_back - fbest < 1e-9) break;
                    f_back = fbest;
                }
                if (f1 < f2) {
                    b = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = b - phi * (b - a);
                    f1 = at(c1);
                } else {
                    a = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = a + phi * (b - a);
                    f2 = at(c2);
                }
            }
            w[j] = bj;
        }
        if (best.logN1 >= r_lo && best.logN1 <= r_hi && (fbest < 1e-3 || sweep >= 2)) break;
        if (best.logN1 >= r_lo && best.logN1 <= r_hi) continue;
        if (sweep == 5 || !(best.logN1 > 0.5)) break;
        for (auto& x : w) x *= static_cast<quad>(r_mid / best.logN1);
        log_profile p;
        const double f = score(w, p);
        if (f >= 1e300) break;
        fbest = f;
        best = p;
    }
    return true;
}

} // namespace detail

/**
 * \brief mu-cloud of exp(h) at radii 1..max_log_radius.
 *
 * Draw i targets logN1 = r_i on a stratified grid and cycles through five
 * coefficient patterns: a single basis direction, a random mixture of
 * log-sizes, two directions at equal size, a one-parameter subgroup of
 * a random direction, and a mixture inside h cut by a sum of root spaces
 * (with or without a). Signs are random. The log-sizes are rescaled up to
 * three times towards r_i. Every draw uses its own generator seeded from
 * (seed, i), so the result does not depend on the thread count.
 *
 * Further draws descend towards a wall: budget/100 per wall (at least 4)
 * start in the top radius decile and budget/25 per wall (at least 8) at
 * stratified radii from 1.5 upwards. Half of them multiply the factors in
 * reverse order, which parametrizes the inverses of the forward products.
 * Each root space cut of h gets four plain draws and, from dimension 2 on,
 * one seek per wall in the top decile.
 */
inline mu_cloud sample_cloud(const group_spec& g, const std::vector<vec>& basis, std::size_t budget,
                             double max_log_radius = 40.0, std::uint64_t seed = 1) {
    const auto chk = check_subalgebra(g, basis);
    if (!chk.ok) throw not_subalgebra_error("sample_cloud: " + chk.reason);
    if (!(max_log_radius > 1.0)) throw domain_error("sample_cloud: max_log_radius must exceed 1");
    const detail::sampler smp = detail::make_sampler(g, basis, seed);
    const std::size_t m = basis.size();

    std::vector<mu_sample> out(budget);
    std::vector<char> ok(budget, 0);
    auto draw = [&](std::size_t i) {
        std::mt19937_64 rng(detail::splitmix(seed * 0x100000001b3ULL + i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = 1.0 + (max_log_radius - 1.0) * ((static_cast<double>(i) + u(rng)) / static_cast<double>(budget));
        const sample_plan* plan = &smp.full.plan;
        const std::vector<detail::factor_scale>* sc = &smp.full.scales;
        vec size(m, 0.0);
        std::vector<int> sign(m, 1);
        switch (i % 5) {
        case 0: size[(i / 5) % m] = 1.0; break;
        case 1:
            for (auto& s : size) s = u(rng);
            size[rng() % m] = 1.0;
            break;
        case 2: {
            const std::size_t a = rng() % m, b = rng() % m;
            size[a] = size[b] = 1.0;
            break;
        }
        case 3:
            if (smp.lines.empty()) {
                size[rng() % m] = 1.0;
            } else {
                const std::size_t k = rng() % smp.lines.size();
                plan = &smp.lines[k];
                sc = &smp.line_scales[k];
                size.assign(1, 1.0);
                sign.assign(1, 1);
            }
            break;
        default:
            if (smp.subs.empty()) {
                size[rng() % m] = 1.0;
            } else {
                const auto& sp = smp.subs[(i / 5) % smp.subs.size()];
                plan = &sp.plan;
                sc = &sp.scales;
                size.assign(sp.plan.factors.size(), 0.0);
                sign.assign(size.size(), 1);
                for (auto& s : size) s = u(rng);
                size[rng() % size.size()] = 1.0;
            }
        }
        for (auto& s : sign) s = (rng() & 1U) ? 1 : -1;
        for (auto& s : size) s *= r;
        log_profile p;
        double lam = 1.0;
        bool good = false;
        for (int it = 0; it < 4; ++it) {
            good = detail::eval_profile(*plan, *sc, size, sign, lam, p);
            if (!good) {
                lam *= 0.5;
                continue;
            }
            if (std::fabs(p.logN1 - r) <= 0.5 || p.logN1 < 1e-3) break;
            lam *= std::clamp(r / p.logN1, 0.25, 4.0);
        }
        if (!good) return;
        out[i] = {i, -1, p.logN1, p.logN2, p.logS1, p.logS12};
        ok[i] = 1;
    };

    // extra draws: wall seeks on h (budget/100 per wall in the top decile,
    // budget/25 per wall at stratified radii); per root space cut of h, four
    // plain draws in the top decile and, if the cut has dimension >= 2, one
    // top-decile seek per wall
    struct task {
        const detail::plan_pair* pp;
        bool rev;
        bool seek;
        double k, r_lo, r_hi;
    };
    const auto [k1, k2] = g.is_so2n() ? std::make_pair(1.0, 2.0) : std::make_pair(0.5, 2.0);
    const std::size_t ntop = budget == 0 ? 0 : std::max<std::size_t>(4, budget / 100);
    const std::size_t nstrat = budget == 0 ? 0 : std::max<std::size_t>(8, budget / 25);
    const double top_lo = 1.0 + 0.9 * (max_log_radius - 1.0);
    std::vector<task> tasks;
    for (std::size_t q = 0; q < ntop; ++q)
        for (const double k : {k1, k2}) tasks.push_back({&smp.full, q % 2 == 1, true, k, top_lo, max_log_radius});
    for (std::size_t j = 0; j < nstrat; ++j) {
        const double mid = 2.0 + (max_log_radius - 2.5) * ((static_cast<double>(j) + 0.5) / static_cast<double>(nstrat));
        for (const double k : {k1, k2}) tasks.push_back({&smp.full, j % 2 == 1, true, k, mid - 0.5, mid + 0.5});
    }
    if (budget > 0)
        for (std::size_t c = 0; c < smp.subs.size(); ++c) {
            const auto& sp = smp.subs[c];
            for (int t = 0; t < 4; ++t) tasks.push_back({&sp, t % 2 == 1, false, 0.0, top_lo, max_log_radius});
            if (sp.plan.factors.size() >= 2)
                for (const double k : {k1, k2}) tasks.push_back({&sp, c % 2 == 1, true, k, top_lo, max_log_radius});
        }
    std::vector<mu_sample> seek(tasks.size());
    std::vector<char> seek_ok(seek.size(), 0);
    auto seek_draw = [&](std::size_t i) {
        const task& tk = tasks[i];
        std::mt19937_64 rng(detail::splitmix((seed ^ 0xa0761d6478bd642fULL) * 0x100000001b3ULL + i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = tk.r_lo + (tk.r_hi - tk.r_lo) * u(rng);
        const sample_plan& plan = tk.rev ? tk.pp->reversed : tk.pp->plan;
        const auto& sc = tk.rev ? tk.pp->reversed_scales : tk.pp->scales;
        const std::size_t mm = plan.factors.size();
        log_profile p;
        if (tk.seek) {
            detail::qvec w(mm);
            for (auto& x : w) x = r * u(rng) * ((rng() & 1U) ? 1.0 : -1.0);
            w[rng() % mm] = (rng() & 1U) ? r : -r;
            if (!detail::seek_wall(plan, sc, w, tk.k, tk.r_lo, tk.r_hi, p)) return;
        } else {
            vec size(mm);
            std::vector<int> sign(mm);
            for (auto& x : size) x = u(rng);
            size[rng() % mm] = 1.0;
            for (auto& x : size) x *= r;
            for (auto& x : sign) x = (rng() & 1U) ? 1 : -1;
            double lam = 1.0;
            bool good = false;
            for (int it = 0; it < 4; ++it) {
                good = detail::eval_profile(plan, sc, size, sign, lam, p);
                if (!good) {
                    lam *= 0.5;
                    continue;
                }
                if (std::fabs(p.logN1 - r) <= 0.5 || p.logN1 < 1e-3) break;
                lam *= std::clamp(r / p.logN1, 0.25, 4.0);
            }
            if (!good) return;
        }
        seek[i] = {budget + i, -1, p.logN1, p.logN2, p.logS1, p.logS12};
        seek_ok[i] = 1;
    };

    const std::size_t total = budget + seek.size();
    auto job = [&](std::size_t i) {
        if (i < budget) draw(i);
        else seek_draw(i - budget);
    };
    const unsigned nt = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(total, 1)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < total; ++i) job(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < total; i += nt) job(i);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < seek.size(); ++i) {
        out.push_back(seek[i]);
        ok.push_back(seek_ok[i]);
    }

    mu_cloud c;
    c.spec = g;
    c.max_log_radius = max_log_radius;
    c.seed = seed;
    c.budget = budget;
    const std::size_t nb = static_cast<std::size_t>(std::ceil(max_log_radius));
    c.bin_counts.assign(nb, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!ok[i]) {
            ++c.skipped;
            continue;
        }
        mu_sample s = out[i];
        if (s.logN1 > max_log_radius + 1.0) continue;
        if (s.logN1 >= 1.0 && s.logN1 < max_log_radius) {
            s.bin = static_cast<int>(std::floor(s.logN1));
            ++c.bin_counts[static_cast<std::size_t>(s.bin)];
        }
        c.samples.push_back(s);
    }
    for (std::size_t b = 1; b < nb; ++b)
        if (c.bin_counts[b] < 20) c.partial = true;
    if (budget == 0) c.partial = true;
    return c;
}

// ---------------------------------------------------------------------------
// chamber coordinates of a sample

/** \brief Wall exponents k1 < k2 of chi_2 against chi_1. */
inline std::pair<double, double> wall_exponents(const group_spec& g) {
    return g.is_so2n() ? std::make_pair(1.0, 2.0) : std::make_pair(0.5, 2.0);
}

/** \brief mu in lambda coordinates recovered from (chi_1, chi_2). */
inline chamber_point lambda_of(const group_spec& g, const mu_sample& s) {
    if (g.is_so2n()) return chamber_point{{s.logS1, s.logS12 - s.logS1}};
    return chamber_point{{s.logS1, s.logS12 - s.logS1, -s.logS12}};
}

// ---------------------------------------------------------------------------
// two-wall test

struct wall_result {
    bool hit1 = false;
    bool hit2 = false;
    double gap1 = 0.0; ///< min |chi2/chi1 - k1| over the top decile
    double gap2 = 0.0;
    double ratio_inf = 0.0;
    double ratio_sup = 0.0;
    std::size_t top_count = 0;
};

/** \brief Samples whose logN1 lies in the top tenth of [1, max radius]. */
inline std::vector<const mu_sample*> top_decile(const mu_cloud& c) {
    const double lo = 1.0 + 0.9 * (c.max_log_radius - 1.0);
    std::vector<const mu_sample*> top;
    for (const auto& s : c.samples)
        if (s.logN1 >= lo) top.push_back(&s);
    return top;
}

inline void require_span(const mu_cloud& c, const char* who) {
    if (c.samples.empty() || c.max_radius() - std::max(1.0, c.min_radius()) < 4.0)
        throw domain_error(std::string(who) + ": cloud spans fewer than 4 units of log radius");
}

/** \brief Wall hits of the top-decile ratios chi_2/chi_1, from exact singular values. */
inline wall_result two_wall_test(const mu_cloud& c, double k1, double k2, double tol = 0.05) {
    require_span(c, "two_wall_test");
    wall_result w;
    const auto top = top_decile(c);
    w.top_count = top.size();
    w.gap1 = w.gap2 = std::numeric_limits<double>::infinity();
    w.ratio_inf = std::numeric_limits<double>::infinity();
    w.ratio_sup = -std::numeric_limits<double>::infinity();
    for (const mu_sample* s : top) {
        const double r = s->logS12 / s->logS1;
        w.gap1 = std::min(w.gap1, std::fabs(r - k1));
        w.gap2 = std::min(w.gap2, std::fabs(r - k2));
        w.ratio_inf = std::min(w.ratio_inf, r);
        w.ratio_sup = std::max(w.ratio_sup, r);
    }
    w.hit1 = w.gap1 <= tol;
    w.hit2 = w.gap2 <= tol;
    return w;
}

inline wall_result two_wall_test(const mu_cloud& c, double tol = 0.05) {
    const auto [k1, k2] = wall_exponents(c.spec);
    return two_wall_test(c, k1, k2, tol);
}

// ---------------------------------------------------------------------------
// band check

struct fit_report {
    bool pass = false;
    wall_result walls;
    double c_estimate = 1.0;
    double q_lower = 0.0; ///< fitted log exponent of the lower envelope
    double q_upper = 0.0;
    double p_fit = 0.0;   ///< curves: fitted power over the cloud
    double k_fit = 0.0;   ///< log curves: fitted perpendicular drift
    std::vector<std::string> diagnostics;
};

namespace detail {

inline double fit_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(xy.size());
    my /= static_cast<double>(xy.size());
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

// envelope of y - p x per unit bin of x (sup or inf), as (log x, residual);
// bins with fewer than 3 samples or past the radius are left out
inline std::vector<std::pair<double, double>> envelope(const mu_cloud& c, double p, bool upper, double x0) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t nb = static_cast<std::size_t>(std::ceil(c.max_log_radius)) + 2;
    std::vector<double> best(nb, upper ? -1e300 : 1e300), at(nb, 0.0);
    std::vector<char> has(nb, 0);
    std::vector<int> cnt(nb, 0);
    for (const auto& s : c.samples) {
        const double x = s.logS1;
        if (x < x0) continue;
        const std::size_t b = std::min(nb - 1, static_cast<std::size_t>(x));
        ++cnt[b];
        const double r = s.logS12 - p * x;
        if (upper ? r > best[b] : r < best[b]) {
            best[b] = r;
            at[b] = x;
            has[b] = 1;
        }
    }
    for (std::size_t b = 0; b < nb; ++b)
        if (has[b] && cnt[b] >= 3 && static_cast<double>(b) + 1.0 <= c.max_log_radius)
            pts.emplace_back(std::log(at[b]), best[b]);
    return pts;
}

// slope of an envelope: per-bin extremes can only fall short of the true
// envelope, so points more than 0.3 on the inner side of the fitted line are
// dropped and the line refitted while at least 4 points remain
inline double envelope_slope(std::vector<std::pair<double, double>> pts, bool upper) {
    for (int round = 0; round < 20; ++round) {
        const double b = fit_slope(pts);
        if (!std::isfinite(b)) return b;
        double mx = 0, my = 0;
        for (const auto& [x, y] : pts) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        std::vector<std::pair<double, double>> keep;
        for (const auto& pt : pts) {
            const double r = pt.second - (my + b * (pt.first - mx));
            if (upper ? r >= -0.3 : r <= 0.3) keep.push_back(pt);
        }
        if (keep.size() == pts.size() || keep.size() < 4) return b;
        pts = std::move(keep);
    }
    return fit_slope(pts);
}

inline void line_bounds(const mu_cloud& c, double p1, double q1, double p2, double q2, double x0, double& logc) {
    for (const auto& s : c.samples) {
        const double x = s.logS1;
        if (x < x0) continue;
        const double lx = std::log(x);
        const double dl = s.logS12 - (p1 * x + q1 * lx);
        const double du = (p2 * x + q2 * lx) - s.logS12;
        logc = std::max({logc, -dl, -du});
    }
}

inline double ratio_of_direction(const group_spec& g, const vec& l) {
    if (g.is_so2n()) return (l[0] + l[1]) / l[0];
    return -l[2] / l[0];
}

} // namespace detail

/**
 * \brief Checks the cloud against a predicted shape.
 *
 * Curve and Band: C = exp of the largest excursion of chi_2 below
 * f1(chi_1) or above f2(chi_1), in logarithms; the lower and upper
 * envelopes (inf and sup of chi_2 - p chi_1 per unit bin above
 * chi_1 = 4) are regressed on log chi_1, trimming bins that fall short of
 * the line, and must give q within q_tol.
 * A ray in n is the curve of its growth. ConeRegion is the band between
 * its two edge slopes with q = 0. RayPair requires every sample near one
 * of the two rays and both rays reached. LogCurve folds each sample by the
 * opposition involution onto the branch of the ray, then fits the
 * perpendicular drift against the log of the distance along the ray. FullChamber
 * passes iff both walls are hit.
 */
inline fit_report band_check(const mu_cloud& c, const mu_shape& shape, const tolerances& tol = {}) {
    require_span(c, "band_check");
    const group_spec& g = c.spec;
    fit_report f;
    f.walls = two_wall_test(c, tol.wall_tol);
    const double x0 = 4.0;
    double logc = 0.0;
    std::ostringstream d;

    auto band_like = [&](double p1, double q1, double p2, double q2) {
        detail::line_bounds(c, p1, q1, p2, q2, x0, logc);
        f.q_lower = detail::envelope_slope(detail::envelope(c, p1, false, x0), false);
        f.q_upper = detail::envelope_slope(detail::envelope(c, p2, true, x0), true);
        f.c_estimate = std::exp(logc);
        const bool ql = std::fabs(f.q_lower - q1) <= tol.q_tol;
        const bool qu = std::fabs(f.q_upper - q2) <= tol.q_tol;
        f.pass = f.c_estimate <= tol.c_max && ql && qu;
        d << "C=" << f.c_estimate << " q_lower=" << f.q_lower << " (want " << q1 << ") q_upper=" << f.q_upper
          << " (want " << q2 << ")";
    };

    switch (shape.kind) {
    case shape_kind::full_chamber:
        f.pass = f.walls.hit1 && f.walls.hit2;
        d << "walls " << f.walls.hit1 << f.walls.hit2;
        break;
    case shape_kind::curve:
    case shape_kind::band:
        band_like(shape.lower.p.value(), shape.lower.q.value(), shape.upper.p.value(), shape.upper.q.value());
        break;
    case shape_kind::ray:
        if (!shape.has_growth()) throw domain_error("band_check: ray without growth data");
        band_like(shape.lower.p.value(), 0.0, shape.lower.p.value(), 0.0);
        break;
    case shape_kind::cone_region:
        band_like(shape.slope_lo, 0.0, shape.slope_hi, 0.0);
        break;
    case shape_kind::ray_pair: {
        const double ka = detail::ratio_of_direction(g, shape.direction);
        const double kb = detail::ratio_of_direction(g, shape.image);
        bool hit_a = false, hit_b = false;
        const double lo = 1.0 + 0.9 * (c.max_log_radius - 1.0);
        for (const auto& s : c.samples) {
            if (s.logS1 < x0) continue;
            const double da = std::fabs(s.logS12 - ka * s.logS1);
            const double db = std::fabs(s.logS12 - kb * s.logS1);
            logc = std::max(logc, std::min(da, db));
            if (s.logN1 >= lo) {
                hit_a = hit_a || da <= std::log(tol.c_max);
                hit_b = hit_b || db <= std::log(tol.c_max);
            }
        }
        f.c_estimate = std::exp(logc);
        f.pass = f.c_estimate <= tol.c_max && hit_a && hit_b;
        d << "C=" << f.c_estimate << " rays " << ka << "," << kb << " reached " << hit_a << hit_b;
        break;
    }
    case shape_kind::log_curve: {
        // along = <lambda, direction>, drift = <lambda, image>
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : c.samples) {
            if (s.logS1 < x0) continue;
            // mu(H) is X together with i(X)
            const chamber_point p = lambda_of(g, s);
            const vec li = opposition_involution(g, p).lambda;
            const vec l = dot(li, shape.direction) > dot(p.lambda, shape.direction) ? li : p.lambda;
            const double a = dot(l, shape.direction);
            if (a <= 1.0) continue;
            pts.emplace_back(std::log(a), dot(l, shape.image));
        }
        f.k_fit = detail::fit_slope(pts);
        double mx = 0, my = 0;
        for (const auto& [x, y] : pts) {
            mx += x;
            my += y;
        }
        if (!pts.empty()) {
            mx /= static_cast<double>(pts.size());
            my /= static_cast<double>(pts.size());
        }
        for (const auto& [x, y] : pts) logc = std::max(logc, std::fabs(y - my - f.k_fit * (x - mx)));
        f.c_estimate = std::exp(logc);
        f.pass = pts.size() >= 2 && f.c_estimate <= tol.c_max && f.k_fit > 0.25;
        d << "C=" << f.c_estimate << " drift " << f.k_fit << " per log radius";
        break;
    }
    }
    // overall power from a least-squares fit of chi_2 on chi_1
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : c.samples)
        if (s.logS1 >= x0) xy.emplace_back(s.logS1, s.logS12);
    f.p_fit = detail::fit_slope(xy);
    f.diagnostics.push_back(d.str());
    return f;
}

/**
 * \brief Fitted exponent p of chi_2 ~ p chi_1 over the samples with logN1 in [lo, hi].
 */
inline double fit_exponent(const mu_cloud& c, double lo, double hi) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : c.samples)
        if (s.logN1 >= lo && s.logN1 <= hi) xy.emplace_back(s.logS1, s.logS12);
    return detail::fit_slope(xy);
}

/**
 * \brief Slope gap to a wall that the shape is not supposed to reach.
 *
 * Returns the minimum over the top decile of |chi_2/chi_1 - k|.
 */
inline double wall_margin(const mu_cloud& c, double k) {
    double m = std::numeric_limits<double>::infinity();
    for (const mu_sample* s : top_decile(c)) m = std::min(m, std::fabs(s->logS12 / s->logS1 - k));
    return m;
}

/** \brief A wall that the predicted shape stays away from, with the observed margin. */
struct wall_margin_entry {
    double k = 0.0;
    double margin = 0.0;     ///< observed, from wall_margin
    double predicted = 0.0;  ///< slope gap at the largest chi_1 in the top decile
    bool log_approach = false;
    bool ok = false;
};

namespace detail {

// predicted chi_2/chi_1 values of the shape near the wall k, with the log coefficient
struct wall_side {
    double p = 0.0;
    double q = 0.0;
};

inline std::vector<wall_side> sides_near(const group_spec& g, const mu_shape& s, bool lower_wall) {
    switch (s.kind) {
    case shape_kind::curve: return {{s.lower.p.value(), s.lower.q.value()}};
    case shape_kind::band:
        return lower_wall ? std::vector<wall_side>{{s.lower.p.value(), s.lower.q.value()}}
                          : std::vector<wall_side>{{s.upper.p.value(), s.upper.q.value()}};
    case shape_kind::cone_region: return {{lower_wall ? s.slope_lo : s.slope_hi, 0.0}};
    case shape_kind::ray:
        if (s.has_growth()) return {{s.lower.p.value(), 0.0}};
        return {{ratio_of_direction(g, s.direction), 0.0}};
    case shape_kind::ray_pair:
        return {{ratio_of_direction(g, s.direction), 0.0}, {ratio_of_direction(g, s.image), 0.0}};
    case shape_kind::log_curve: {
        const vec mirror = opposition_involution(g, chamber_point{s.direction}).lambda;
        return {{ratio_of_direction(g, s.direction), std::nan("")}, {ratio_of_direction(g, mirror), std::nan("")}};
    }
    case shape_kind::full_chamber: break;
    }
    return {};
}

} // namespace detail

/**
 * \brief Margins to the walls the shape does not reach.
 *
 * A wall k is missed when no side of the shape has slope k with a bounded
 * offset. If a side has slope p != k the top decile must keep
 * |chi_2/chi_1 - k| >= tol.wall_margin. If the side has slope k and a log
 * term q log chi_1, the gap at chi_1 = x is |q| log x / x, which tends to
 * zero; the observed margin must then be positive and at least half of that
 * prediction at the largest chi_1 of the top decile. A log curve along a
 * wall has no closed form gap and only needs a positive margin.
 */
inline std::vector<wall_margin_entry> wall_margins(const mu_cloud& c, const mu_shape& shape, const tolerances& tol = {}) {
    std::vector<wall_margin_entry> out;
    if (shape.kind == shape_kind::full_chamber) return out;
    require_span(c, "wall_margins");
    const auto [k1, k2] = wall_exponents(c.spec);
    double xmax = 0.0;
    for (const mu_sample* s : top_decile(c)) xmax = std::max(xmax, s->logS1);
    for (const bool lower : {true, false}) {
        const double k = lower ? k1 : k2;
        const auto sides = detail::sides_near(c.spec, shape, lower);
        bool reached = false, log_side = false;
        double q = 0.0, gap = std::numeric_limits<double>::infinity();
        for (const auto& sd : sides) {
            if (std::fabs(sd.p - k) <= 1e-9) {
                if (std::isnan(sd.q) || sd.q != 0.0) {
                    log_side = true;
                    q = sd.q;
                } else {
                    reached = true;
                }
            } else {
                gap = std::min(gap, std::fabs(sd.p - k));
            }
        }
        if (reached) continue;
        wall_margin_entry e;
        e.k = k;
        e.margin = wall_margin(c, k);
        e.log_approach = log_side;
        if (log_side) {
            e.predicted = std::isnan(q) || xmax <= 1.0 ? 0.0 : std::fabs(q) * std::log(xmax) / xmax;
            e.ok = e.margin > 0.0 && e.margin >= 0.5 * e.predicted;
        } else {
            e.predicted = gap;
            e.ok = e.margin >= tol.wall_margin;
        }
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// conjugation stability

struct stability_report {
    double max_offset = 0.0;
    double slope = 0.0; ///< offset against logN1
    std::size_t samples = 0;
    bool pass = false;
};

/**
 * \brief Offsets between mu(h) and mu(x h x^-1) on matched draws.
 *
 * x must be a group member. Draws use the coefficient schedule of
 * sample_cloud; pass iff the offset shows no trend (slope within 0.02).
 */
inline stability_report conjugation_stability(const group_spec& g, const std::vector<vec>& basis, const mat& x,
                                              std::size_t budget = 400, double max_log_radius = 40.0,
                                              std::uint64_t seed = 1) {
    if (!is_member(g, x)) throw not_member_error("conjugation_stability: conjugator is not in the group");
    const sample_plan plan = make_sample_plan(g, basis);
    std::vector<detail::factor_scale> sc;
    for (const auto& f : plan.factors) sc.push_back(detail::scale_of(g, f));
    const basic_mat<quad> xq = convert<quad>(x);
    const basic_mat<quad> xi = convert<quad>(inverse(x));
    const std::size_t m = basis.size();
    stability_report rep;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < budget; ++i) {
        std::mt19937_64 rng(detail::splitmix(seed * 0x100000001b3ULL + i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = 1.0 + (max_log_radius - 1.0) * u(rng);
        std::vector<quad> c(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double l = (i % 2 == 0 ? (j == (i / 2) % m ? r : 0.0) : r * u(rng));
            c[j] = ((rng() & 1U) ? 1 : -1) * static_cast<quad>(detail::coefficient_for(sc[j], l));
        }
        basic_mat<quad> h;
        try {
            h = group_sample_element<quad>(plan, c);
        } catch (const overflow_error&) {
            continue;
        }
        log_profile a, b;
        try {
            a = profile_of<quad>(h);
            b = profile_of<quad>(basic_mat<quad>(xq * h * xi));
        } catch (const overflow_error&) {
            continue;
        }
        if (a.logN1 > max_log_radius + 1.0) continue;
        const mu_sample sa{i, -1, a.logN1, a.logN2, a.logS1, a.logS12};
        const mu_sample sb{i, -1, b.logN1, b.logN2, b.logS1, b.logS12};
        const double off = chamber_distance(lambda_of(g, sa), lambda_of(g, sb));
        rep.max_offset = std::max(rep.max_offset, off);
        pts.emplace_back(a.logN1, off);
    }
    rep.samples = pts.size();
    rep.slope = pts.size() >= 2 ? detail::fit_slope(pts) : 0.0;
    if (!std::isfinite(rep.slope)) rep.slope = 0.0;
    rep.pass = std::fabs(rep.slope) <= 0.02;
    return rep;
}

// ---------------------------------------------------------------------------
// properness probe

enum class properness { likely_proper, not_proper, inconclusive };

inline std::string to_string(properness p) {
    switch (p) {
    case properness::likely_proper: return "likely-proper";
    case properness::not_proper: return "not-proper";
    case properness::inconclusive: return "inconclusive";
    }
    return "?";
}

struct properness_report {
    properness verdict = properness::inconclusive;
    double slope = 0.0;                                    ///< min cloud distance against radius
    std::vector<std::pair<std::size_t, std::size_t>> pairs; ///< matched sample ids (h1, h2)
    std::vector<double> min_distance;                      ///< per unit bin of h1
};

/**
 * \brief Heuristic properness evidence from two clouds.
 *
 * For each unit radius bin of h1 the smallest chamber distance to the
 * cloud of h2 is recorded. A positive trend (slope >= 0.05) reads as
 * likely proper; distances staying below `near` in the outer half reads
 * as not proper, with the closest pairs as witnesses.
 */
inline properness_report properness_probe(const group_spec& g, const std::vector<vec>& h1, const std::vector<vec>& h2,
                                          double radius = 30.0, std::size_t budget = 1200, std::uint64_t seed = 1,
                                          double near = 3.0) {
    const mu_cloud c1 = sample_cloud(g, h1, budget, radius, seed);
    const mu_cloud c2 = sample_cloud(g, h2, budget, radius, seed + 1);
    properness_report rep;
    const std::size_t nb = static_cast<std::size_t>(std::ceil(radius));
    std::vector<double> best(nb, std::numeric_limits<double>::infinity());
    std::vector<std::pair<std::size_t, std::size_t>> arg(nb);
    std::vector<chamber_point> l2;
    for (const auto& s : c2.samples) l2.push_back(lambda_of(g, s));
    for (const auto& s : c1.samples) {
        if (s.bin < 0) continue;
        const chamber_point l = lambda_of(g, s);
        for (std::size_t j = 0; j < l2.size(); ++j) {
            const double dd = chamber_distance(l, l2[j]);
            const auto b = static_cast<std::size_t>(s.bin);
            if (dd < best[b]) {
                best[b] = dd;
                arg[b] = {s.id, c2.samples[j].id};
            }
        }
    }
    std::vector<std::pair<double, double>> pts;
    bool all_near = true;
    std::size_t outer = 0;
    for (std::size_t b = 1; b < nb; ++b) {
        if (!std::isfinite(best[b])) continue;
        rep.min_distance.push_back(best[b]);
        pts.emplace_back(static_cast<double>(b), best[b]);
        if (static_cast<double>(b) >= radius / 2.0) {
            ++outer;
            if (best[b] <= near) rep.pairs.push_back(arg[b]);
            else all_near = false;
        }
    }
    rep.slope = pts.size() >= 2 ? detail::fit_slope(pts) : 0.0;
    if (rep.slope >= 0.05) rep.verdict = properness::likely_proper;
    else if (outer > 0 && all_near) rep.verdict = properness::not_proper;
    else rep.verdict = properness::inconclusive;
    if (rep.verdict != properness::not_proper) rep.pairs.clear();
    return rep;
}

} // namespace cartankit
