#pragma once

#include <optional>
#include <vector>

#include "lobsim/domain.hpp"
#include "lobsim/params.hpp"

namespace lobsim {

using ParamsD = MarketParams<double>;

// Number of consecutive spread-shrinking trades supportable from spread s
// before the spread floor is crossed: the unique z with
// (1+alpha)^z * s_lower <= s < (1+alpha)^(z+1) * s_lower.
int limit_capacity(double s, const ParamsD& p);

// Number of consecutive spread-widening trades supportable from spread s
// while the spread stays at or below (1-gamma)*a_upper, clamped at zero.
int market_capacity(double s, const ParamsD& p);

struct RegionLabels {
    bool in_WM = false;  // spread within one shrink of the floor
    bool in_WL = false;  // spread in the forced-limit band at the top
    bool in_WB = false;  // book depth within one widen of the bottom tip
    bool in_WS = false;  // book depth in the forced-sell band at the top
    bool in_H = false;   // any buffering band
    bool in_K = false;   // kernel: complement of the buffering bands
    bool in_U2 = false;  // spread strictly between the two spread bands
    bool in_V2 = false;  // mid strictly between the two depth bands
};

RegionLabels region_labels(const QuoteD& q, const ParamsD& p);

// Probability that the next trader is a limit type: 0 near the spread floor,
// 1 in the wide-spread band, interpolated monotonically in log spread between.
double prob_limit(const QuoteD& q, const ParamsD& p);

// Probability that the next trader is a buyer: 1 near the bottom tip,
// 0 in the high-mid band, interpolated monotonically decreasing in log mid.
double prob_buy(const QuoteD& q, const ParamsD& p);

struct TypeDistribution {
    double p1 = 0;  // BL
    double p2 = 0;  // BM
    double p3 = 0;  // SL
    double p4 = 0;  // SM

    double pL() const { return p1 + p3; }
    double pM() const { return p2 + p4; }
    double pB() const { return p1 + p2; }
    double pS() const { return p3 + p4; }
};

TypeDistribution type_distribution(const QuoteD& q, const ParamsD& p);

// Convex polygon in the (b, a) plane, counterclockwise vertex order.
// Empty vertex list means an empty intersection.
struct KernelPolygon {
    std::vector<QuoteD> vertices;
};

KernelPolygon domain_polygon(const ParamsD& p);
KernelPolygon kernel_polygon(const ParamsD& p);
KernelPolygon u2_polygon(const ParamsD& p);
KernelPolygon v2_polygon(const ParamsD& p);

// Width of the spread (resp. mid) band covered by the polygon: sup minus inf
// over the vertices. Empty polygon has no range.
std::optional<double> range_s(const KernelPolygon& poly);
std::optional<double> range_m(const KernelPolygon& poly);

struct StabilityReport {
    double threshold = 0;  // alpha*(1+alpha)*(2+alpha)*s_lower
    std::optional<double> r_s_K;
    std::optional<double> r_m_K;
    std::optional<double> r_s_U2;
    std::optional<double> r_m_V2;
    bool kernel_regime = false;    // both kernel ranges exceed the threshold
    bool spread_pinned = false;    // spread band collapsed below one rung, mid range wide
    bool mid_pinned = false;       // mid band collapsed below half a rung, spread range wide
    double exponent_l = 0;         // rungs from the spread floor up to (1-gamma)*a_upper
    double exponent_h = 0;         // 3 - exponent_l
    bool exponent_ok = false;      // (1-gamma)*(1+alpha)^h <= 1
};

StabilityReport stability_preconditions(const ParamsD& p);

}  // namespace lobsim
