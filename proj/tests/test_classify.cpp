#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cartankit/classify.hpp"

using namespace cartankit;

namespace {

const group_spec sl3 = make_group(group_kind::sl3);

vec ev(std::size_t m, std::size_t k, double s = 1.0) {
    vec v(m, 0.0);
    v[k] = s;
    return v;
}

// so2n element from named parts; x and y given as sparse (slot, value) lists
vec so(const group_spec& g, double t1, double t2, double phi, std::vector<std::pair<int, double>> x,
       std::vector<std::pair<int, double>> y, double eta) {
    vec xv(g.m(), 0.0), yv(g.m(), 0.0);
    for (auto [k, s] : x) xv[static_cast<std::size_t>(k)] = s;
    for (auto [k, s] : y) yv[static_cast<std::size_t>(k)] = s;
    return so2n_coord(g, t1, t2, phi, xv, yv, eta);
}

void expect_witnesses_valid(const group_spec& g, const verdict& v) {
    const auto onb = orth(v.form.basis.empty() ? std::vector<vec>{} : v.form.basis, g.coord_dim);
    for (const auto& w : v.witnesses) {
        EXPECT_TRUE(recheck(g, w)) << w.condition;
        if (!onb.empty()) EXPECT_LT(distance_to_span(w.element, onb), 1e-8 * norm2(w.element)) << w.condition;
    }
}

verdict run(const group_spec& g, const std::vector<vec>& basis) {
    const verdict v = classify(g, basis);
    EXPECT_EQ(v.is_cds, v.shape.kind == shape_kind::full_chamber);
    expect_witnesses_valid(g, v);
    return v;
}

} // namespace

// ---------------------------------------------------------------------------

TEST(RootsemiCondition, Examples) {
    EXPECT_TRUE(sl3_rootsemi_condition(1, 1));
    EXPECT_FALSE(sl3_rootsemi_condition(1, -0.9));
    EXPECT_TRUE(sl3_rootsemi_condition(1, -0.5));
    EXPECT_THROW(sl3_rootsemi_condition(0, 0), domain_error);
}

TEST(ConeTest, AgreesWithInequalityOnGrid) {
    const int alpha = 0;
    for (int i = -200; i <= 200; ++i) {
        const double p = i / 100.0;
        for (double q : {1.0, -1.0, 0.3}) {
            if (p == 0.0 && q == 0.0) continue;
            // distance to the switching set of the inequality
            const double f1 = p + q + std::max(p, q), f2 = p + q + std::min(p, q);
            if (std::fabs(f1) < 1e-9 || std::fabs(f2) < 1e-9) continue;
            const cone_result c = cone_test(sl3, sl3_coord(p, q, -p - q, 0, 0, 0), alpha);
            EXPECT_EQ(c.is_cds, sl3_rootsemi_condition(p, q)) << p << "," << q;
        }
    }
}

TEST(ConeTest, ScalingInvariance) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2), s(0.01, 50);
    for (int it = 0; it < 200; ++it) {
        const double p = u(rng), q = u(rng), k = s(rng);
        for (int root = 0; root < 3; ++root) {
            const auto a = cone_test(sl3, sl3_coord(p, q, -p - q, 0, 0, 0), root);
            const auto b = cone_test(sl3, sl3_coord(k * p, k * q, -k * (p + q), 0, 0, 0), root);
            const auto c = cone_test(sl3, sl3_coord(-k * p, -k * q, k * (p + q), 0, 0, 0), root);
            EXPECT_EQ(a.is_cds, b.is_cds);
            EXPECT_EQ(a.is_cds, c.is_cds);
        }
    }
}

TEST(ConeTest, RegionForOneMinusNineTenths) {
    // t+ = (1,-0.9,-0.1) sorts to (1,-0.1,-0.9), slope 0.9; its mirror
    // (0.9,-1,0.1) sorts to (0.9,0.1,-1), slope 10/9
    const auto c = cone_test(sl3, sl3_coord(1, -0.9, -0.1, 0, 0, 0), 0);
    ASSERT_FALSE(c.is_cds);
    EXPECT_EQ(c.region.kind, shape_kind::cone_region);
    EXPECT_NEAR(c.region.slope_lo, 0.9, 1e-12);
    EXPECT_NEAR(c.region.slope_hi, 10.0 / 9.0, 1e-12);
}

TEST(ConeTest, So2nWallCase) {
    // a_alpha = (1,-1) lies on the wall of alpha+2beta; the region is the
    // open quadrant t1 > 0 > t2
    const auto g = make_group(group_kind::so2n, 4);
    const int alpha = 0;
    EXPECT_TRUE(cone_test(g, so(g, 3, 1, 0, {}, {}, 0), alpha).is_cds);
    EXPECT_FALSE(cone_test(g, so(g, 3, -1, 0, {}, {}, 0), alpha).is_cds);
    const auto c = cone_test(g, so(g, 1, -3, 0, {}, {}, 0), alpha);
    ASSERT_FALSE(c.is_cds);
    // mirror of (1,-3) across (1,-1) is (3,-1): dominant (3,1), slope 4/3; a_alpha gives slope 2
    EXPECT_NEAR(c.region.slope_lo, 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(c.region.slope_hi, 2.0, 1e-12);
    // on the boundary: beta(t) = 0
    const auto b = cone_test(g, so(g, 1, 0, 0, {}, {}, 0), alpha);
    EXPECT_TRUE(b.is_cds);
    EXPECT_TRUE(b.boundary);
}

// ---------------------------------------------------------------------------
// SL3

TEST(ClassifySL3, TorusIsCds) {
    const auto v = run(sl3, {sl3_coord(1, -1, 0, 0, 0, 0), sl3_coord(0, 1, -1, 0, 0, 0)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3-CDS(2)");
}

TEST(ClassifySL3, PlanesInN) {
    auto v = run(sl3, {sl3_coord(0, 0, 0, 1, 0, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_FALSE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3notCDS(2)");
    EXPECT_EQ(v.shape.kind, shape_kind::curve);
    EXPECT_EQ(v.shape.lower, growth(1, 1));
    v = run(sl3, {sl3_coord(0, 0, 0, 0, 1, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_EQ(v.rule, "SL3notCDS(2)");
    v = run(sl3, {sl3_coord(0, 0, 0, 1, 1, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3-CDS(3)");
    v = run(sl3, {sl3_coord(0, 0, 0, 1, -2.5, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_EQ(v.rule, "SL3-CDS(3)");
}

TEST(ClassifySL3, SemidirectPlanes) {
    auto v = run(sl3, {sl3_coord(1, 1, -2, 0, 0, 0), sl3_coord(0, 0, 0, 0, 1, 2)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3-CDS(4)");
    v = run(sl3, {sl3_coord(-2, 1, 1, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 1)});
    EXPECT_EQ(v.rule, "SL3-CDS(5)");
    // ker(alpha - beta) = R diag(1,0,-1)
    v = run(sl3, {sl3_coord(1, 0, -1, 0, 0, 0), sl3_coord(0, 0, 0, 1, 1, 0)});
    EXPECT_FALSE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3notCDS(3)");
    EXPECT_EQ(v.shape.lower, growth(1, 1));
}

TEST(ClassifySL3, RootSemidirect) {
    auto v = run(sl3, {sl3_coord(1, 1, -2, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3-CDS(6)");
    v = run(sl3, {sl3_coord(1, -0.9, -0.1, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0)});
    EXPECT_FALSE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3notCDS(5)");
    EXPECT_EQ(v.shape.kind, shape_kind::cone_region);
}

TEST(ClassifySL3, GraphAndSmallCases) {
    auto v = run(sl3, {sl3_coord(1, 1, -2, 1, 0, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_FALSE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3notCDS(4)");
    EXPECT_EQ(v.form.kind, form_kind::graph);
    EXPECT_EQ(v.shape.kind, shape_kind::band);
    EXPECT_EQ(v.shape.lower, growth(1, 2, 1, 2));
    EXPECT_EQ(v.shape.upper, growth(2, 1, -1));

    v = run(sl3, {sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_EQ(v.rule, "SL3notCDS(1)");
    EXPECT_EQ(v.shape.kind, shape_kind::ray);
    EXPECT_NEAR(v.shape.direction[0], 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(v.shape.direction[2], -1 / std::sqrt(2.0), 1e-12);

    v = run(sl3, {sl3_coord(1, 0, -1, 0, 0, 0)});
    EXPECT_EQ(v.shape.kind, shape_kind::ray_pair);

    v = run(sl3, {sl3_coord(1, 1, -2, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0), sl3_coord(0, 0, 0, 0, 0, 1)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SL3-CDS(1)");
}

// ---------------------------------------------------------------------------
// SO2n inside N

TEST(ExistentialTests, QuadricIsotropy) {
    const auto g = make_group(group_kind::so2n, 4);
    EXPECT_FALSE(quadric_isotropy(g, {so(g, 0, 0, 1, {}, {}, 1)}).found);
    EXPECT_FALSE(quadric_isotropy(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {{1, 1}}, {}, 0)}).found);
    auto r = quadric_isotropy(g, {so(g, 0, 0, 0, {}, {}, 1)});
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(recheck(g, {"E4", r.element, -1}));
    // Q(a phi + b eta) = 2ab is indefinite
    r = quadric_isotropy(g, {so(g, 0, 0, 1, {}, {}, 0), so(g, 0, 0, 0, {}, {}, 1)});
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(recheck(g, {"E4", r.element, -1}));
    // |x|^2 + 2 phi eta on span{phi + eta, x1 - eta}: Gram [[2,-1],[-1,1]] definite
    EXPECT_FALSE(quadric_isotropy(g, {so(g, 0, 0, 1, {}, {}, 1), so(g, 0, 0, 0, {{0, 1}}, {}, -1)}).found);
}

TEST(ExistentialTests, ParallelPair) {
    const auto g = make_group(group_kind::so2n, 4);
    auto r = parallel_pair_exists(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0)});
    EXPECT_TRUE(r.found);
    r = parallel_pair_exists(g, {so(g, 0, 0, 1, {}, {}, 0), so(g, 0, 0, 0, {}, {{0, 1}}, 0)});
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(recheck(g, {"E2", r.element, -1}));
    // x = (a,b), y = (-b,a): never parallel
    r = parallel_pair_exists(g, {so(g, 0, 0, 0, {{0, 1}}, {{1, 1}}, 0), so(g, 0, 0, 0, {{1, 1}}, {{0, -1}}, 0)});
    EXPECT_FALSE(r.found);
    EXPECT_TRUE(r.decided);
    // x = (a,b), y = (b,a): parallel on a = b
    r = parallel_pair_exists(g, {so(g, 0, 0, 0, {{0, 1}}, {{1, 1}}, 0), so(g, 0, 0, 0, {{1, 1}}, {{0, 1}}, 0)});
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(recheck(g, {"E2", r.element, -1}));
}

TEST(ExistentialTests, ParallelPairScan) {
    // three-dimensional pencil in R^3 with one planted parallel direction
    const auto g = make_group(group_kind::so2n, 5);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 10; ++it) {
        std::vector<vec> h;
        for (int j = 0; j < 3; ++j) {
            vec v = zero_coord(g);
            for (std::size_t k = 0; k < 3; ++k) {
                v[g.i_x(k)] = nd(rng);
                v[g.i_y(k)] = nd(rng);
            }
            h.push_back(v);
        }
        // replace the x part of h[0] + h[1] by 1.7 times its y part
        const vec s = axpy(1.0, h[0], h[1]);
        for (std::size_t k = 0; k < 3; ++k) h[1][g.i_x(k)] += 1.7 * s[g.i_y(k)] - s[g.i_x(k)];
        const auto r = parallel_pair_exists(g, h);
        ASSERT_TRUE(r.found) << it;
        EXPECT_TRUE(recheck(g, {"E2", r.element, -1}));
    }
}

TEST(ExistentialTests, IndependentPair) {
    const auto g = make_group(group_kind::so2n, 4);
    auto r = independent_pair_exists(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {}, {{0, 1}}, 0)});
    EXPECT_FALSE(r.found);  // x e1 and y e1 only give parallel rows
    r = independent_pair_exists(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {}, {{1, 1}}, 0)});
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(recheck(g, {"E3", r.element, -1}));
    EXPECT_FALSE(independent_pair_exists(g, {so(g, 0, 0, 1, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {}, 3)}).found);
}

TEST(ClassifySO2nInN, CatalogsAreCds) {
    for (int n : {3, 4, 5, 6}) {
        const auto g = make_group(group_kind::so2n, n);
        const auto cat = catalog_minimal(g);
        const std::size_t expected = n >= 5 ? 6 : (n == 4 ? 5 : 3);
        EXPECT_EQ(cat.size(), expected) << n;
        for (const auto& e : cat) {
            const verdict v = run(g, e.basis);
            EXPECT_TRUE(v.is_cds) << n << " " << e.name << " " << v.rule;
            EXPECT_EQ(v.cert, certainty::exact);
            for (std::size_t drop = 0; drop < e.basis.size(); ++drop) {
                auto b = e.basis;
                b.erase(b.begin() + static_cast<std::ptrdiff_t>(drop));
                EXPECT_FALSE(run(g, b).is_cds) << e.name;
            }
        }
    }
}

TEST(ClassifySO2nInN, NotCdsRules) {
    const auto g = make_group(group_kind::so2n, 4);
    // phi = 0, x and y independent or zero everywhere
    auto v = run(g, {so(g, 0, 0, 0, {{0, 1}}, {{1, 1}}, 0), so(g, 0, 0, 0, {{1, 1}}, {{0, -1}}, 0), so(g, 0, 0, 0, {}, {}, 1)});
    EXPECT_EQ(v.rule, "HinN-notCDS(2)");
    EXPECT_EQ(v.shape.lower, growth(2, 1));
    // phi = 0, rank one everywhere, eta-axis missing
    v = run(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {{1, 1}}, {}, 0)});
    EXPECT_EQ(v.rule, "HinN-notCDS(3)");
    EXPECT_EQ(v.shape.lower, growth(1, 1));
    // SO(1,n) type: eta = phi, X0 = R e1, b = c = 0, p = 1
    v = run(g, {so(g, 0, 0, 1, {}, {}, 1), so(g, 0, 0, 0, {{0, 1}}, {}, 0)});
    EXPECT_EQ(v.rule, "HinN-notCDS(4)");
    EXPECT_EQ(v.shape.lower, growth(1, 1));
}

TEST(ClassifySO2nInN, CdsRules) {
    const auto g = make_group(group_kind::so2n, 5);
    auto v = run(g, {so(g, 0, 0, 1, {}, {{0, 1}}, 0), so(g, 0, 0, 0, {}, {}, 1)});
    EXPECT_EQ(v.rule, "SO2n-HinN-CDS(1)");
    ASSERT_EQ(v.witnesses.size(), 1u);
    EXPECT_EQ(v.witnesses[0].condition, "E1");
    v = run(g, {so(g, 0, 0, 1, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-HinN-CDS(2)");
    EXPECT_EQ(v.witnesses.size(), 2u);
}

TEST(ClassifySO2nInN, LineShapes) {
    const auto g = make_group(group_kind::so2n, 4);
    EXPECT_EQ(run(g, {so(g, 0, 0, 1, {}, {{0, 1}}, 0)}).shape.lower, growth(3, 2));
    EXPECT_EQ(run(g, {so(g, 0, 0, 0, {{0, 1}}, {}, 0)}).shape.lower, growth(1, 1));
    EXPECT_EQ(run(g, {so(g, 0, 0, 0, {}, {{0, 1}}, 0)}).shape.lower, growth(1, 1));
    const auto eta = run(g, {so(g, 0, 0, 0, {}, {}, 1)});
    EXPECT_EQ(eta.shape.kind, shape_kind::ray);
    EXPECT_EQ(eta.shape.lower, growth(2, 1));
    EXPECT_NEAR(eta.shape.direction[0], eta.shape.direction[1], 1e-12);
    // |x|^2 = -2 phi eta: isotropic line
    EXPECT_EQ(run(g, {so(g, 0, 0, 1, {{0, std::sqrt(2.0)}}, {}, -1)}).shape.lower, growth(2, 1));
}

// ---------------------------------------------------------------------------
// SO2n semidirect and graph forms

TEST(ClassifySO2nSemidirect, Items) {
    const auto g = make_group(group_kind::so2n, 4);
    auto v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 1)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(5)");
    EXPECT_EQ(v.shape.lower, growth(1, 1));
    v = run(g, {so(g, 1, 1, 0, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {}, 0)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SO2n-semiprod(3)");
    v = run(g, {so(g, 2, 1, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {{0, 1}}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(6)");
    EXPECT_EQ(v.shape.lower, growth(3, 2));
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(3)");
    v = run(g, {so(g, 0, 1, 0, {}, {}, 0), so(g, 0, 0, 0, {}, {{0, 1}}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(4)");
    // eta = -phi: p = -1, discriminant 2 > 0
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, -1)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(7)");
    // x = phi e1: c = e1, discriminant -1
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 1, {{0, 1}}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(5)");
    // phi = 0, x and y independent, T = ker alpha
    v = run(g, {so(g, 1, 1, 0, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {{1, 1}}, 0), so(g, 0, 0, 0, {{1, 1}}, {{0, -1}}, 0),
                so(g, 0, 0, 0, {}, {}, 1)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(2)");
    EXPECT_EQ(v.shape.lower, growth(2, 1));
    v = run(g, {so(g, 1, -3, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(8)");
    EXPECT_EQ(v.shape.kind, shape_kind::cone_region);
    v = run(g, {so(g, 3, 1, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semiprod(5)");
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semiprod(4)");
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semi-notCDS(1)");
    EXPECT_EQ(v.shape.kind, shape_kind::ray_pair);
    v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 1, 0, {}, {}, 0)});
    EXPECT_EQ(v.rule, "SO2n-semiprod(1)");
}

TEST(ClassifySO2nGraph, Cases) {
    const auto g = make_group(group_kind::so2n, 4);
    struct item {
        std::vector<vec> basis;
        std::string rule;
        growth_fn lo, hi;
    };
    const std::vector<item> items = {
        {{so(g, 1, 1, 1, {}, {}, 0), so(g, 0, 0, 0, {{0, 1}}, {}, 0)}, "SO2n-notsemi-notCDS(1)", growth(1, 1), growth(2, 1, -1)},
        {{so(g, 1, 1, 1, {}, {}, 0), so(g, 0, 0, 0, {}, {}, 1)}, "SO2n-notsemi-notCDS(2)", growth(2, 1, -2), growth(2, 1)},
        {{so(g, 1, -1, 0, {}, {}, 1), so(g, 0, 0, 1, {}, {}, 0)}, "SO2n-notsemi-notCDS(3)", growth(2, 1, -2), growth(2, 1)},
        {{so(g, 1, -1, 0, {}, {}, 1), so(g, 0, 0, 0, {}, {{0, 1}}, 0)}, "SO2n-notsemi-notCDS(4)", growth(1, 1), growth(2, 1, -1)},
        {{so(g, 0, 1, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {}, {{1, 1}}, 0)}, "SO2n-notsemi-notCDS(6)", growth(1, 1), growth(1, 1, 2)},
        {{so(g, 0, 1, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {}, {}, 1)}, "SO2n-notsemi-notCDS(7)", growth(1, 1, 1), growth(2, 1)},
        {{so(g, 1, 0, 0, {}, {{0, 1}}, 0), so(g, 0, 0, 0, {}, {}, 1)}, "SO2n-notsemi-notCDS(7)", growth(1, 1, 1), growth(2, 1)},
        {{so(g, 0, 1, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)}, "SO2n-notsemi-notCDS(8)", growth(1, 1, 1), growth(2, 1)},
    };
    for (const auto& it : items) {
        const verdict v = run(g, it.basis);
        EXPECT_EQ(v.form.kind, form_kind::graph) << it.rule;
        EXPECT_FALSE(v.is_cds) << it.rule;
        EXPECT_EQ(v.rule, it.rule);
        EXPECT_EQ(v.shape.kind, shape_kind::band);
        EXPECT_EQ(v.shape.lower, it.lo) << it.rule;
        EXPECT_EQ(v.shape.upper, it.hi) << it.rule;
    }
    // abelian, omega = beta, meets u_beta: Cartan-decomposition
    const verdict v = run(g, {so(g, 1, 0, 0, {}, {{0, 1}}, 0), so(g, 0, 0, 0, {}, {{1, 1}}, 0)});
    EXPECT_TRUE(v.is_cds);
    EXPECT_EQ(v.rule, "SO2n-notsemi-CDS");
}

TEST(ClassifySO2nGraph, CaseFiveHasNoSubalgebra) {
    // u = x + c eta with T = ker(alpha+beta): [t + x0, u] = c eta leaves span{t + x0, u}
    const auto g = make_group(group_kind::so2n, 4);
    EXPECT_FALSE(check_subalgebra(g, {so(g, 0, 1, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 0, {{1, 1}}, {}, 1)}).ok);
}

// ---------------------------------------------------------------------------

TEST(Classify, DimOneShapes) {
    auto v = run(sl3, {sl3_coord(1, 1, -2, 1, 0, 0)});
    EXPECT_EQ(v.shape.kind, shape_kind::log_curve);
    EXPECT_EQ(v.shape.k, 1);
    EXPECT_NEAR(dot(v.shape.direction, v.shape.image), 0.0, 1e-12);
    const auto g = make_group(group_kind::so2n, 4);
    v = run(g, {so(g, 1, 0, 0, {}, {{0, 1}}, 0)});
    EXPECT_EQ(v.shape.kind, shape_kind::log_curve);
    EXPECT_EQ(v.shape.k, 2);
    EXPECT_EQ(v.rule, "dim>Rrank");
    // a + n with n cleared by conjugation is a torus line
    v = run(g, {so(g, 1, 0, 1, {}, {}, 0)});
    EXPECT_EQ(v.shape.kind, shape_kind::ray_pair);
}

TEST(Classify, RejectsNonSubalgebra) {
    const auto g = make_group(group_kind::so2n, 4);
    EXPECT_THROW(classify(g, {so(g, 0, 0, 1, {}, {}, 0), so(g, 0, 0, 0, {}, {{0, 1}}, 0)}), not_subalgebra_error);
}

TEST(Classify, ConjugationInvariance) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 0.7);
    const auto g = make_group(group_kind::so2n, 4);
    const std::vector<std::vector<vec>> cases = {
        {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 1)},
        {so(g, 2, 1, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {{0, 1}}, 0)},
        {so(g, 1, 1, 1, {}, {}, 0), so(g, 0, 0, 0, {}, {}, 1)},
        {so(g, 0, 1, 0, {{0, 1}}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)},
        {so(g, 1, -3, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)},
        {so(g, 0, 0, 1, {}, {}, 1), so(g, 0, 0, 0, {{0, 1}}, {}, 0)},
    };
    for (const auto& h : cases) {
        const verdict base = classify(g, h);
        for (int it = 0; it < 5; ++it) {
            vec z = zero_coord(g);
            for (std::size_t k = g.toral_dim; k < g.coord_dim; ++k) z[k] = nd(rng);
            const mat e = exp_nil(g, z);
            std::vector<vec> conj;
            for (const auto& b : h) conj.push_back(adjoint(g, e, b));
            const verdict v = classify(g, conj);
            EXPECT_EQ(v.is_cds, base.is_cds) << base.rule;
            EXPECT_EQ(v.rule, base.rule);
            expect_witnesses_valid(g, v);
        }
    }
}

TEST(Classify, ContainsAShortcut) {
    const auto g = make_group(group_kind::so2n, 5);
    // a + u_alpha + u_alpha+2beta style algebras have dim T = 2
    auto v = run(g, {so(g, 1, 0, 0, {}, {}, 0), so(g, 0, 1, 0, {}, {}, 0), so(g, 0, 0, 1, {}, {}, 0)});
    EXPECT_TRUE(v.is_cds);
    v = run(sl3, {sl3_coord(1, -1, 0, 0, 0, 0), sl3_coord(0, 1, -1, 0, 0, 0), sl3_coord(0, 0, 0, 1, 0, 0)});
    EXPECT_TRUE(v.is_cds);
}

TEST(Catalog, Sl3Entries) {
    const auto cat = catalog_minimal(sl3);
    bool has_a = false, has_rot = false;
    for (const auto& e : cat) {
        if (e.metadata_only) {
            has_rot = true;
            continue;
        }
        has_a = has_a || e.name == "A";
        const verdict v = run(sl3, e.basis);
        EXPECT_TRUE(v.is_cds) << e.name;
        for (std::size_t drop = 0; drop < e.basis.size(); ++drop) {
            auto b = e.basis;
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(drop));
            if (!check_subalgebra(sl3, b).ok) continue;
            EXPECT_FALSE(run(sl3, b).is_cds) << e.name << " without " << drop;
        }
    }
    EXPECT_TRUE(has_a);
    EXPECT_TRUE(has_rot);
}
