#include "lobsim/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobsim {

namespace {

void check_spread_range(double s, const ParamsD& p) {
    if (!(s >= p.s_lower && s <= p.a_upper))
        throw std::domain_error("spread outside [s_lower, a_upper]");
}

double shape_value(double u, PiShape shape) {
    u = std::clamp(u, 0.0, 1.0);
    switch (shape) {
        case PiShape::AffineLog: return u;
        case PiShape::SmoothstepLog: return u * u * (3 - 2 * u);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

int limit_capacity(double s, const ParamsD& p) {
    check_spread_range(s, p);
    const double r = 1 + p.alpha;
    int z = static_cast<int>(std::floor(std::log(s / p.s_lower) / std::log(r)));
    if (z < 0) z = 0;
    // the log estimate can be off by one at rung boundaries
    while (p.s_lower * std::pow(r, z + 1) <= s) ++z;
    while (z > 0 && p.s_lower * std::pow(r, z) > s) --z;
    return z;
}

int market_capacity(double s, const ParamsD& p) {
    check_spread_range(s, p);
    const double r = 1 + p.alpha;
    const double cap = (1 - p.gamma) * p.a_upper;
    if (s > cap) return 0;
    // smallest y with s * r^y > cap
    int y = static_cast<int>(std::floor(std::log(cap / s) / std::log(r))) + 1;
    if (y < 1) y = 1;
    while (s * std::pow(r, y) <= cap) ++y;
    while (y > 1 && s * std::pow(r, y - 1) > cap) --y;
    return y;
}

RegionLabels region_labels(const QuoteD& q, const ParamsD& p) {
    if (!in_domain(q, p)) throw std::domain_error("quote outside the admissible domain");
    const double s = spread(q);
    const double depth = q.b + q.a;
    RegionLabels lab;
    lab.in_WM = s >= p.s_lower && s < (1 + p.alpha) * p.s_lower;
    lab.in_WL = s > (1 - p.gamma) * p.a_upper && s <= p.a_upper;
    lab.in_WB = depth >= p.s_lower && depth < (1 + p.delta) * p.s_lower;
    lab.in_WS = depth > (1 - p.epsilon) * (2 * p.a_upper - p.s_lower) &&
                depth <= 2 * p.a_upper - p.s_lower;
    lab.in_H = lab.in_WM || lab.in_WL || lab.in_WB || lab.in_WS;
    lab.in_K = !lab.in_H;
    lab.in_U2 = !(lab.in_WM || lab.in_WL);
    lab.in_V2 = !(lab.in_WB || lab.in_WS);
    return lab;
}

double prob_limit(const QuoteD& q, const ParamsD& p) {
    const double lo = (1 + p.alpha) * p.s_lower;
    const double hi = (1 - p.gamma) * p.a_upper;
    if (!(lo < hi)) throw ConfigError("degenerate spread band: (1+alpha)*s_lower >= (1-gamma)*a_upper");
    const double s = spread(q);
    if (s < lo) return 0;
    if (s > hi) return 1;
    const double u = (std::log(s) - std::log(lo)) / (std::log(hi) - std::log(lo));
    return shape_value(u, p.pi_shape);
}

double prob_buy(const QuoteD& q, const ParamsD& p) {
    const double lo = (1 + p.delta) * p.s_lower / 2;
    const double hi = (1 - p.epsilon) * (p.a_upper - p.s_lower / 2);
    if (!(lo < hi)) throw ConfigError("degenerate mid band: depth bands overlap");
    const double m = mid_price(q);
    if (m < lo) return 1;
    if (m > hi) return 0;
    const double u = (std::log(m) - std::log(lo)) / (std::log(hi) - std::log(lo));
    return 1 - shape_value(u, p.pi_shape);
}

TypeDistribution type_distribution(const QuoteD& q, const ParamsD& p) {
    const double pl = prob_limit(q, p);
    const double pb = prob_buy(q, p);
    return {pl * pb, (1 - pl) * pb, pl * (1 - pb), (1 - pl) * (1 - pb)};
}

namespace {

// Keeps the part of a convex polygon with cb*b + ca*a <= rhs. A band that
// collapses to a segment or point keeps its vertices, so its ranges are 0
// rather than undefined; only a truly empty cut returns no vertices.
KernelPolygon clip_halfplane(const KernelPolygon& poly, double cb, double ca, double rhs) {
    KernelPolygon out;
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const QuoteD& cur = v[i];
        const QuoteD& nxt = v[(i + 1) % n];
        const double dc = cb * cur.b + ca * cur.a - rhs;
        const double dn = cb * nxt.b + ca * nxt.a - rhs;
        if (dc <= 0) out.vertices.push_back(cur);
        if ((dc < 0 && dn > 0) || (dc > 0 && dn < 0)) {
            const double t = dc / (dc - dn);
            out.vertices.push_back({cur.b + t * (nxt.b - cur.b), cur.a + t * (nxt.a - cur.a)});
        }
    }
    return out;
}

}  // namespace

KernelPolygon domain_polygon(const ParamsD& p) {
    return {{{0, p.s_lower}, {p.a_upper - p.s_lower, p.a_upper}, {0, p.a_upper}}};
}

KernelPolygon u2_polygon(const ParamsD& p) {
    KernelPolygon poly = domain_polygon(p);
    poly = clip_halfplane(poly, 1, -1, -(1 + p.alpha) * p.s_lower);
    poly = clip_halfplane(poly, -1, 1, (1 - p.gamma) * p.a_upper);
    return poly;
}

KernelPolygon v2_polygon(const ParamsD& p) {
    KernelPolygon poly = domain_polygon(p);
    poly = clip_halfplane(poly, -1, -1, -(1 + p.delta) * p.s_lower);
    poly = clip_halfplane(poly, 1, 1, (1 - p.epsilon) * (2 * p.a_upper - p.s_lower));
    return poly;
}

KernelPolygon kernel_polygon(const ParamsD& p) {
    KernelPolygon poly = u2_polygon(p);
    poly = clip_halfplane(poly, -1, -1, -(1 + p.delta) * p.s_lower);
    poly = clip_halfplane(poly, 1, 1, (1 - p.epsilon) * (2 * p.a_upper - p.s_lower));
    return poly;
}

namespace {

template <class F>
std::optional<double> vertex_range(const KernelPolygon& poly, F&& f) {
    if (poly.vertices.empty()) return std::nullopt;
    double lo = f(poly.vertices.front());
    double hi = lo;
    for (const QuoteD& v : poly.vertices) {
        lo = std::min(lo, f(v));
        hi = std::max(hi, f(v));
    }
    return hi - lo;
}

}  // namespace

std::optional<double> range_s(const KernelPolygon& poly) {
    return vertex_range(poly, [](const QuoteD& v) { return v.a - v.b; });
}

std::optional<double> range_m(const KernelPolygon& poly) {
    return vertex_range(poly, [](const QuoteD& v) { return (v.a + v.b) / 2; });
}

StabilityReport stability_preconditions(const ParamsD& p) {
    StabilityReport rep;
    rep.threshold = p.alpha * (1 + p.alpha) * (2 + p.alpha) * p.s_lower;

    const KernelPolygon k = kernel_polygon(p);
    rep.r_s_K = range_s(k);
    rep.r_m_K = range_m(k);
    rep.r_s_U2 = range_s(u2_polygon(p));
    rep.r_m_V2 = range_m(v2_polygon(p));

    rep.kernel_regime = rep.r_s_K && rep.r_m_K &&
                        std::min(*rep.r_s_K, *rep.r_m_K) > rep.threshold;
    rep.spread_pinned = rep.r_s_U2 && rep.r_m_V2 &&
                        *rep.r_s_U2 < p.alpha * (1 + p.alpha) * p.s_lower &&
                        *rep.r_m_V2 > rep.threshold;
    rep.mid_pinned = rep.r_s_U2 && rep.r_m_V2 &&
                     *rep.r_m_V2 < p.alpha * (1 + p.alpha) * p.s_lower / 2 &&
                     *rep.r_s_U2 > rep.threshold;

    rep.exponent_l = std::log((1 - p.gamma) * p.a_upper / p.s_lower) / std::log(1 + p.alpha);
    rep.exponent_h = 3 - rep.exponent_l;
    rep.exponent_ok = (1 - p.gamma) * std::pow(1 + p.alpha, rep.exponent_h) <= 1;
    return rep;
}

}  // namespace lobsim
