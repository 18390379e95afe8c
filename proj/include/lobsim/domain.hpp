#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>

#include "lobsim/params.hpp"
#include "lobsim/rational.hpp"
#include "lobsim/types.hpp"

namespace lobsim {

// Absolute slack allowed on the domain inequalities in floating point mode.
// Exact-rational mode compares exactly.
inline constexpr double kDomainTol = 1e-12;

template <class T>
struct Quote {
    T b;  // best bid
    T a;  // best ask

    friend bool operator==(const Quote& x, const Quote& y) { return x.b == y.b && x.a == y.a; }
};

using QuoteD = Quote<double>;
using QuoteQ = Quote<Rat>;

template <class T>
T spread(const Quote<T>& q) {
    return T(q.a - q.b);
}

template <class T>
T mid_price(const Quote<T>& q) {
    return T((q.a + q.b) / T(2));
}

template <class T>
constexpr T domain_tol() {
    if constexpr (std::is_same_v<T, double>)
        return kDomainTol;
    else
        return T(0);
}

// Membership in the admissible triangle W = {b >= 0, a <= a_upper, a-b >= s_lower}.
template <class T>
bool in_domain(const Quote<T>& q, const MarketParams<T>& p) {
    const T tol = domain_tol<T>();
    return q.b >= T(-tol) && q.a <= T(p.a_upper + tol) && T(q.a - q.b) >= T(p.s_lower - tol);
}

template <class T>
Mat2<T> atomic_matrix(TraderType type, const T& alpha) {
    const T one(1);
    const T inv = T(one / (one + alpha));
    switch (type) {
        case TraderType::BL: return {inv, T(alpha * inv), T(0), one};
        case TraderType::BM: return {one, T(0), T(-alpha), T(one + alpha)};
        case TraderType::SL: return {one, T(0), T(alpha * inv), inv};
        case TraderType::SM: return {T(one + alpha), T(-alpha), T(0), one};
    }
    throw std::logic_error("unreachable");
}

template <class T>
Quote<T> mat_apply(const Mat2<T>& m, const Quote<T>& q) {
    return {T(m.m00 * q.b + m.m01 * q.a), T(m.m10 * q.b + m.m11 * q.a)};
}

template <class T>
struct TradeOutcome {
    Quote<T> next;
    bool clipped = false;
};

namespace detail {

// Root of the affine slack g(l) = gd + l*(gr - gd) within the segment, if any.
template <class T>
std::optional<T> segment_root(T gd, T gr) {
    if constexpr (std::is_same_v<T, double>) {
        // d sits inside W up to tolerance; tiny negative slack is boundary dust
        if (gd < 0) gd = 0;
    }
    if (gd == gr) return std::nullopt;  // constant slack: parallel or in-line
    T l = T(gd / (gd - gr));
    if (l < T(0) || l > T(1)) return std::nullopt;
    return l;
}

}  // namespace detail

// One trade. The raw image S_i(d) is kept if it stays in W; otherwise the quote
// moves along the segment toward the raw image and stops on the first boundary
// line it meets (ties resolved in the order spread floor, ask ceiling, bid floor).
template <class T>
TradeOutcome<T> apply_matrix(const Mat2<T>& m, const Quote<T>& q, const MarketParams<T>& p) {
    if (!in_domain(q, p)) throw std::domain_error("quote outside the admissible domain");
    const Quote<T> raw = mat_apply(m, q);
    if (in_domain(raw, p)) return {raw, false};

    // Slacks of the three boundary lines at the start and at the raw image.
    const T gd[3] = {T(q.a - q.b - p.s_lower), T(p.a_upper - q.a), q.b};
    const T gr[3] = {T(raw.a - raw.b - p.s_lower), T(p.a_upper - raw.a), raw.b};

    std::optional<T> best;
    int best_line = -1;
    for (int i = 0; i < 3; ++i) {
        auto l = detail::segment_root(gd[i], gr[i]);
        if (l && (!best || *l < *best)) {
            best = l;
            best_line = i;
        }
    }
    if (!best) throw std::logic_error("raw image left W but no boundary crossing found");

    const T l = *best;
    Quote<T> hit{T(q.b + l * (raw.b - q.b)), T(q.a + l * (raw.a - q.a))};
    if constexpr (std::is_same_v<T, double>) {
        // land exactly on the chosen line
        if (best_line == 0) {
            const double e = (hit.a - hit.b - p.s_lower) / 2;
            hit.b += e;
            hit.a -= e;
        } else if (best_line == 1) {
            hit.a = p.a_upper;
        } else {
            hit.b = 0.0;
        }
    }
    return {hit, true};
}

template <class T>
TradeOutcome<T> apply_type(const Quote<T>& q, TraderType type, const MarketParams<T>& p) {
    return apply_matrix(atomic_matrix(type, p.alpha), q, p);
}

// Where an endless run of one trader type ends up: the absorbing point reached
// once the repeated map pushes the quote out of W.
template <class T>
Quote<T> constant_type_limit(const Quote<T>& q, TraderType type, const MarketParams<T>& p) {
    switch (type) {
        case TraderType::BL: return {T(q.a - p.s_lower), q.a};
        case TraderType::BM: return {q.b, p.a_upper};
        case TraderType::SL: return {q.b, T(q.b + p.s_lower)};
        case TraderType::SM: return {T(0), q.a};
    }
    throw std::logic_error("unreachable");
}

}  // namespace lobsim
