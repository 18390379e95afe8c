#pragma once

#include <stdexcept>
#include <string>

namespace lobsim {

// Configuration and validation problems; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monotone interpolation used for the switching probabilities between their
// forced regions. Affine in log coordinates by default; the smoothstep variant
// exists to show results do not hinge on the particular monotone shape.
enum class PiShape { AffineLog, SmoothstepLog };

inline const char* pi_shape_name(PiShape s) {
    return s == PiShape::AffineLog ? "affine_log" : "smoothstep_log";
}

inline PiShape pi_shape_from_name(const std::string& name) {
    if (name == "affine_log") return PiShape::AffineLog;
    if (name == "smoothstep_log") return PiShape::SmoothstepLog;
    throw ConfigError("unknown pi_shape '" + name + "' (expected affine_log or smoothstep_log)");
}

// Market constants. alpha is the relative order size of a marginal trader,
// s_lower the minimal spread, a_upper the price ceiling, gamma/delta/epsilon
// the capacity fractions that position the forced-switching bands.
template <class T>
struct MarketParams {
    T alpha;
    T s_lower;
    T a_upper;
    T gamma;
    T delta;
    T epsilon;
    PiShape pi_shape = PiShape::AffineLog;
};

using ParamsD = MarketParams<double>;

template <class T>
MarketParams<T> make_params(T alpha, T s_lower, T a_upper, T gamma, T delta, T epsilon,
                            PiShape shape = PiShape::AffineLog) {
    if (!(alpha > T(0) && alpha < T(1))) throw ConfigError("alpha must be in (0,1)");
    if (!(s_lower > T(0))) throw ConfigError("s_lower must be > 0");
    if (!(a_upper > s_lower)) throw ConfigError("a_upper must be > s_lower");
    if (!(gamma < T(1))) throw ConfigError("gamma must be < 1");
    // gamma >= alpha/(1+alpha), written multiplication-only so it is exact for rationals
    if (T((T(1) - gamma) * (T(1) + alpha)) > T(1))
        throw ConfigError("gamma must be >= alpha/(1+alpha)");
    if (!(delta > T(0))) throw ConfigError("delta must be > 0");
    if (!(epsilon < T(1))) throw ConfigError("epsilon must be < 1");
    if (T((T(1) - epsilon) * (T(1) + delta)) > T(1))
        throw ConfigError("epsilon must be >= delta/(1+delta)");
    return {alpha, s_lower, a_upper, gamma, delta, epsilon, shape};
}

}  // namespace lobsim
