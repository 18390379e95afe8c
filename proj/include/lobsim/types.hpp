#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lobsim {

// The four marginal trader types. Enum order is the canonical sigma order
// and doubles as the inverse-CDF sampling order.
enum class TraderType : std::uint8_t { BL = 0, BM = 1, SL = 2, SM = 3 };

constexpr std::array<TraderType, 4> kAllTypes{TraderType::BL, TraderType::BM,
                                              TraderType::SL, TraderType::SM};

constexpr int type_index(TraderType t) { return static_cast<int>(t) + 1; }  // sigma: 1..4

constexpr TraderType type_from_index(int sigma) {
    if (sigma < 1 || sigma > 4) throw std::out_of_range("trader type index must be 1..4");
    return static_cast<TraderType>(sigma - 1);
}

constexpr bool is_limit(TraderType t) { return t == TraderType::BL || t == TraderType::SL; }
constexpr bool is_buy(TraderType t) { return t == TraderType::BL || t == TraderType::BM; }

// BL and SM undo each other, as do BM and SL.
constexpr TraderType inverse_type(TraderType t) {
    switch (t) {
        case TraderType::BL: return TraderType::SM;
        case TraderType::BM: return TraderType::SL;
        case TraderType::SL: return TraderType::BM;
        case TraderType::SM: return TraderType::BL;
    }
    throw std::logic_error("unreachable");
}

inline const char* type_name(TraderType t) {
    switch (t) {
        case TraderType::BL: return "BL";
        case TraderType::BM: return "BM";
        case TraderType::SL: return "SL";
        case TraderType::SM: return "SM";
    }
    throw std::logic_error("unreachable");
}

inline TraderType type_from_name(const std::string& name) {
    for (TraderType t : kAllTypes)
        if (name == type_name(t)) return t;
    throw std::invalid_argument("unknown trader type '" + name + "' (expected BL, BM, SL or SM)");
}

// Small dense 2x2 matrix over an arbitrary scalar (double or exact rational).
// Acts on column vectors (b, a)'.
template <class T>
struct Mat2 {
    T m00, m01, m10, m11;

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {T(x.m00 * y.m00 + x.m01 * y.m10), T(x.m00 * y.m01 + x.m01 * y.m11),
                T(x.m10 * y.m00 + x.m11 * y.m10), T(x.m10 * y.m01 + x.m11 * y.m11)};
    }
    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.m00 == y.m00 && x.m01 == y.m01 && x.m10 == y.m10 && x.m11 == y.m11;
    }
    T det() const { return T(m00 * m11 - m01 * m10); }

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
};

}  // namespace lobsim
