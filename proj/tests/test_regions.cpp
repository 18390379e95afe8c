#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lobsim/regions.hpp"
#include "oracles.hpp"

using namespace lobsim;

namespace {

ParamsD base_params() { return make_params(0.5, 1.0, 100.0, 0.9, 1.0, 0.5); }

}  // namespace

TEST_CASE("limit capacity matches the printed examples") {
    const ParamsD p = base_params();
    CHECK(limit_capacity(1.0, p) == 0);
    CHECK(limit_capacity(1.5, p) == 1);
    CHECK(limit_capacity(3.0, p) == 2);
    CHECK_THROWS_AS(limit_capacity(0.5, p), std::domain_error);
    CHECK_THROWS_AS(limit_capacity(101.0, p), std::domain_error);
}

TEST_CASE("market capacity counts widenings until the cap is exceeded") {
    const ParamsD p = base_params();
    CHECK(market_capacity(15.0, p) == 0);
    CHECK(market_capacity(1.0, p) == 6);
    // (1 - 0.9) * 100 rounds to just under 10, so 10.0 already exceeds the cap
    CHECK(market_capacity(10.0, p) == 0);
    CHECK_THROWS_AS(market_capacity(0.0, p), std::domain_error);

    // with an exactly representable cap, a spread sitting on the cap needs one widening
    const ParamsD q = make_params(0.5, 1.0, 100.0, 0.875, 1.0, 0.5);
    CHECK(market_capacity(12.5, q) == 1);
    CHECK(market_capacity(12.5000001, q) == 0);
}

TEST_CASE("capacities agree with the iterative oracles on random spreads") {
    const ParamsD p = base_params();
    std::mt19937_64 rng(42);
    for (int i = 0; i < 3000; ++i) {
        const double s = p.s_lower + uniform01(rng) * (p.a_upper - p.s_lower);
        CAPTURE(s);
        CHECK(limit_capacity(s, p) == oracles::shrink_count(s, p));
        CHECK(market_capacity(s, p) == oracles::widen_count(s, p));
    }
}

TEST_CASE("capacity laws: sandwich, monotonicity, one-rung decrement") {
    const ParamsD p = make_params(0.25, 2.0, 500.0, 0.9, 1.0, 0.5);
    std::mt19937_64 rng(9);
    double prev_s = p.s_lower;
    int prev_z = limit_capacity(prev_s, p);
    int prev_y = market_capacity(prev_s, p);
    for (int i = 0; i < 500; ++i) {
        const double s = p.s_lower + uniform01(rng) * (p.a_upper - p.s_lower);
        const int z = limit_capacity(s, p);
        const int y = market_capacity(s, p);
        CHECK(p.s_lower * std::pow(1 + p.alpha, z) <= s);
        CHECK(s < p.s_lower * std::pow(1 + p.alpha, z + 1));
        if (s >= prev_s) {
            CHECK(z >= prev_z);
            CHECK(y <= prev_y);
        } else {
            CHECK(z <= prev_z);
            CHECK(y >= prev_y);
        }
        if (s / (1 + p.alpha) >= p.s_lower)
            CHECK(z - limit_capacity(s / (1 + p.alpha), p) == 1);
        prev_s = s;
        prev_z = z;
        prev_y = y;
    }
}

TEST_CASE("region labels on the printed examples") {
    const ParamsD p = base_params();

    const auto k = region_labels({10, 12}, p);
    CHECK(k.in_K);
    CHECK_FALSE(k.in_H);
    CHECK(k.in_U2);
    CHECK(k.in_V2);

    const auto wm = region_labels({10, 11.2}, p);
    CHECK(wm.in_WM);
    CHECK(wm.in_H);
    CHECK_FALSE(wm.in_K);

    const auto wl = region_labels({40, 60}, p);
    CHECK(wl.in_WL);
    CHECK(wl.in_H);

    CHECK_THROWS_AS(region_labels({50, 50.2}, p), std::domain_error);
}

TEST_CASE("buffering and kernel regions bipartition the domain") {
    const ParamsD p = base_params();
    std::mt19937_64 rng(3);
    for (int i = 0; i < 4000; ++i) {
        const QuoteD q = oracles::random_interior_quote(p, rng);
        const auto lab = region_labels(q, p);
        CHECK(lab.in_H == (lab.in_WL || lab.in_WM || lab.in_WB || lab.in_WS));
        CHECK(lab.in_K != lab.in_H);
        CHECK(lab.in_K == (lab.in_U2 && lab.in_V2));
    }
}

TEST_CASE("limit-probability boundary values and monotonicity") {
    const ParamsD p = base_params();
    CHECK(prob_limit({10, 11.5}, p) == 0.0);
    CHECK(prob_limit({10, 20}, p) == 1.0);
    CHECK(prob_limit({10, 10 + std::sqrt(15.0)}, p) == doctest::Approx(0.5).epsilon(1e-12));

    double prev = -1;
    for (double s = 1.5; s <= 10.0; s += 0.01) {
        const double v = prob_limit({20, 20 + s}, p);
        CHECK(v >= prev);
        if (s > 1.5 && s < 10.0 && prev >= 0) CHECK(v > prev);
        prev = v;
    }

    ParamsD smooth = p;
    smooth.pi_shape = PiShape::SmoothstepLog;
    CHECK(prob_limit({10, 11.5}, smooth) == 0.0);
    CHECK(prob_limit({10, 20}, smooth) == 1.0);
    CHECK(prob_limit({10, 10 + std::sqrt(15.0)}, smooth) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("buy-probability boundary values and monotonicity") {
    const ParamsD p = base_params();
    CHECK(prob_buy({0, 2}, p) == 1.0);                                // mid 1, bottom edge
    CHECK(prob_buy({44.75, 54.75}, p) == 0.0);                        // mid 49.75, top edge
    const double mid = std::sqrt(49.75);
    CHECK(prob_buy({mid - 1, mid + 1}, p) == doctest::Approx(0.5).epsilon(1e-12));

    double prev = 2;
    for (double m = 1.0; m <= 49.75; m += 0.05) {
        const double v = prob_buy({m - 0.5, m + 0.5}, p);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("degenerate interpolation bands are rejected") {
    // (1-gamma)*a_upper falls below (1+alpha)*s_lower: no room to interpolate
    const ParamsD p = make_params(0.5, 1.0, 100.0, 0.99, 1.0, 0.5);
    CHECK_THROWS_AS(prob_limit({10, 12}, p), ConfigError);
}

TEST_CASE("type distribution products, marginals, and forced corners") {
    const ParamsD p = base_params();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const QuoteD q = oracles::random_interior_quote(p, rng);
        const auto d = type_distribution(q, p);
        const double pl = prob_limit(q, p);
        const double pb = prob_buy(q, p);
        CHECK(d.p1 == doctest::Approx(pl * pb).epsilon(1e-12));
        CHECK(d.p2 == doctest::Approx((1 - pl) * pb).epsilon(1e-12));
        CHECK(d.p3 == doctest::Approx(pl * (1 - pb)).epsilon(1e-12));
        CHECK(d.p4 == doctest::Approx((1 - pl) * (1 - pb)).epsilon(1e-12));
        CHECK(d.p1 + d.p2 + d.p3 + d.p4 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.pL() + d.pM() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.pB() + d.pS() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.pL() == doctest::Approx(pl).epsilon(1e-12));
        CHECK(d.pB() == doctest::Approx(pb).epsilon(1e-12));
    }

    // spread and depth both at their forced-buy-market corner
    const auto bm = type_distribution({0.4, 1.55}, p);
    CHECK(bm.p2 == 1.0);
    CHECK(bm.p1 + bm.p3 + bm.p4 == 0.0);

    // wide spread, deep book: forced sell-limit
    const auto sl = type_distribution({45, 56}, p);
    CHECK(sl.p3 == 1.0);
    CHECK(sl.p1 + sl.p2 + sl.p4 == 0.0);

    // reference point: pi_L = 0.6 and pi_B = 0.3 multiply out
    const double s = 1.5 * std::pow(10.0 / 1.5, 0.6);
    const double m = std::pow(49.75, 0.7);
    const auto d = type_distribution({m - s / 2, m + s / 2}, p);
    CHECK(d.p1 == doctest::Approx(0.18).epsilon(1e-9));
    CHECK(d.p2 == doctest::Approx(0.12).epsilon(1e-9));
    CHECK(d.p3 == doctest::Approx(0.42).epsilon(1e-9));
    CHECK(d.p4 == doctest::Approx(0.28).epsilon(1e-9));
}

TEST_CASE("kernel polygon ranges for the reference configuration") {
    const ParamsD p = base_params();
    const auto k = kernel_polygon(p);
    REQUIRE_FALSE(k.vertices.empty());
    for (const QuoteD& v : k.vertices) {
        CHECK(v.a - v.b >= 1.5 - 1e-9);
        CHECK(v.a - v.b <= 10 + 1e-9);
        CHECK(v.a + v.b >= 2 - 1e-9);
        CHECK(v.a + v.b <= 99.5 + 1e-9);
        CHECK(in_domain(v, p));
    }
    CHECK(*range_s(k) == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(*range_m(k) == doctest::Approx(48.75).epsilon(1e-12));
}

TEST_CASE("collapsed and empty bands") {
    // (1-gamma)*a_upper = (1+alpha)*s_lower collapses U2 to a segment
    const ParamsD flat = make_params(0.5, 1.0, 100.0, 0.985, 1.0, 0.5);
    const auto u2 = u2_polygon(flat);
    REQUIRE_FALSE(u2.vertices.empty());
    CHECK(*range_s(u2) == doctest::Approx(0.0).epsilon(1e-12));

    // epsilon close to 1 pushes the depth ceiling below the depth floor
    const ParamsD gone = make_params(0.5, 1.0, 100.0, 0.9, 1.0, 0.999);
    const auto v2 = v2_polygon(gone);
    CHECK(v2.vertices.empty());
    CHECK_FALSE(range_s(v2).has_value());
    CHECK_FALSE(range_m(v2).has_value());
    CHECK(kernel_polygon(gone).vertices.empty());
}

TEST_CASE("stability regimes for the three reference configurations") {
    const auto kernel = stability_preconditions(base_params());
    CHECK(kernel.threshold == doctest::Approx(1.875).epsilon(1e-12));
    CHECK(*kernel.r_s_K == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(*kernel.r_m_K == doctest::Approx(48.75).epsilon(1e-12));
    CHECK(kernel.kernel_regime);
    CHECK_FALSE(kernel.spread_pinned);
    CHECK_FALSE(kernel.mid_pinned);
    CHECK(kernel.exponent_ok);

    const auto pinned_s = stability_preconditions(make_params(0.5, 1.0, 20.0, 0.9, 1.0, 0.5));
    CHECK(*pinned_s.r_s_U2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pinned_s.spread_pinned);
    CHECK_FALSE(pinned_s.kernel_regime);
    CHECK(pinned_s.exponent_l == doctest::Approx(std::log(2.0) / std::log(1.5)).epsilon(1e-12));
    CHECK(pinned_s.exponent_l >= 1.0);
    CHECK(pinned_s.exponent_l < 2.0);
    CHECK(pinned_s.exponent_ok);

    const auto pinned_m = stability_preconditions(make_params(0.5, 1.0, 100.0, 0.9, 1.0, 0.987));
    CHECK(*pinned_m.r_m_V2 == doctest::Approx(0.2935).epsilon(1e-9));
    CHECK(*pinned_m.r_s_U2 == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(pinned_m.mid_pinned);
    CHECK_FALSE(pinned_m.kernel_regime);
    CHECK_FALSE(pinned_m.spread_pinned);
}
