#include "lobsim/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lobsim {

namespace {

std::array<Mat2<double>, 4> atomic_matrices_d(double alpha) {
    return {atomic_matrix(TraderType::BL, alpha), atomic_matrix(TraderType::BM, alpha),
            atomic_matrix(TraderType::SL, alpha), atomic_matrix(TraderType::SM, alpha)};
}

TraderType pick_type(const TypeDistribution& dist, double u) {
    double c = dist.p1;
    if (u < c) return TraderType::BL;
    c += dist.p2;
    if (u < c) return TraderType::BM;
    c += dist.p3;
    if (u < c) return TraderType::SL;
    return TraderType::SM;
}

// Shared stochastic stepper. Reports every visited state, the start included,
// and returns the crash record when a trade clipped.
template <class F>
std::optional<CrashInfo> run_path(const QuoteD& start, long long steps, const ParamsD& p,
                                  std::uint64_t seed, F&& on_state) {
    if (!in_domain(start, p)) throw std::domain_error("start outside the admissible domain");
    const auto mats = atomic_matrices_d(p.alpha);
    std::mt19937_64 rng(seed);
    QuoteD q = start;
    on_state(0LL, q, std::optional<TraderType>{}, region_labels(q, p));
    for (long long t = 1; t <= steps; ++t) {
        const TypeDistribution dist = type_distribution(q, p);
        const TraderType ty = pick_type(dist, uniform01(rng));
        const auto out = apply_matrix(mats[static_cast<int>(ty)], q, p);
        q = out.next;
        on_state(t, q, std::optional<TraderType>{ty}, region_labels(q, p));
        if (out.clipped) return CrashInfo{t, q};
    }
    return std::nullopt;
}

}  // namespace

Trajectory replay(const QuoteD& start, const TypeSequence& seq, const ParamsD& p) {
    if (!in_domain(start, p)) throw std::domain_error("start outside the admissible domain");
    Trajectory traj;
    traj.steps.reserve(seq.size() + 1);
    traj.steps.push_back({0, start, std::nullopt, region_labels(start, p)});
    QuoteD q = start;
    long long t = 0;
    for (TraderType ty : seq) {
        const auto out = apply_type(q, ty, p);
        q = out.next;
        ++t;
        traj.steps.push_back({t, q, ty, region_labels(q, p)});
        if (out.clipped) {
            traj.crash = CrashInfo{t, q};
            break;
        }
    }
    return traj;
}

ExactReplay replay_exact(const QuoteQ& start, const TypeSequence& seq,
                         const MarketParams<Rat>& p) {
    if (!in_domain(start, p)) throw std::domain_error("start outside the admissible domain");
    ExactReplay rep{start, std::nullopt};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto out = apply_type(rep.end, seq[i], p);
        rep.end = out.next;
        if (out.clipped) {
            rep.crash_index = i;
            break;
        }
    }
    return rep;
}

Trajectory simulate(const QuoteD& start, long long steps, const ParamsD& p,
                    std::uint64_t seed) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    Trajectory traj;
    traj.seed = seed;
    traj.steps.reserve(static_cast<std::size_t>(steps) + 1);
    traj.crash = run_path(start, steps, p, seed,
                          [&](long long t, const QuoteD& q, std::optional<TraderType> ty,
                              const RegionLabels& lab) { traj.steps.push_back({t, q, ty, lab}); });
    return traj;
}

StabilitySummary monte_carlo(const QuoteD& start, long long steps, long long n_traj,
                             const ParamsD& p, std::uint64_t master_seed) {
    if (steps < 0 || n_traj < 0) throw std::invalid_argument("steps and n_traj must be >= 0");
    StabilitySummary sum;
    sum.n_trajectories = n_traj;

    const KernelPolygon k = kernel_polygon(p);
    const auto rs = range_s(k);
    const auto rm = range_m(k);
    const bool have_bounds = rs.has_value() && rm.has_value();
    const double a_bound = have_bounds ? *rm + *rs / 2 + 2 * p.s_lower : 0;
    const double b_bound = have_bounds ? *rm + 2 * p.s_lower : 0;

    long long total_states = 0;
    long long h_states = 0;
    bool first = true;
    for (long long i = 0; i < n_traj; ++i) {
        const auto crash =
            run_path(start, steps, p, substream_seed(master_seed, static_cast<std::uint64_t>(i)),
                     [&](long long, const QuoteD& q, std::optional<TraderType>,
                         const RegionLabels& lab) {
                         ++total_states;
                         if (lab.in_H) ++h_states;
                         const double s = spread(q);
                         if (first) {
                             sum.max_b = q.b;
                             sum.max_a = q.a;
                             sum.min_spread = s;
                             sum.max_spread = s;
                             first = false;
                         } else {
                             sum.max_b = std::max(sum.max_b, q.b);
                             sum.max_a = std::max(sum.max_a, q.a);
                             sum.min_spread = std::min(sum.min_spread, s);
                             sum.max_spread = std::max(sum.max_spread, s);
                         }
                         if (have_bounds && (q.a >= a_bound || q.b >= b_bound))
                             ++sum.bound_violations;
                     });
        if (crash) ++sum.n_crashes;
    }
    if (total_states > 0)
        sum.fraction_time_in_H = static_cast<double>(h_states) / static_cast<double>(total_states);
    return sum;
}

Lattice reachable_lattice(const QuoteQ& start, const MarketParams<Rat>& p,
                          std::size_t max_states) {
    if (!in_domain(start, p)) throw std::domain_error("start outside the admissible domain");
    const std::array<Mat2<Rat>, 4> mats = {
        atomic_matrix(TraderType::BL, p.alpha), atomic_matrix(TraderType::BM, p.alpha),
        atomic_matrix(TraderType::SL, p.alpha), atomic_matrix(TraderType::SM, p.alpha)};

    std::set<std::pair<Rat, Rat>> seen;
    std::deque<QuoteQ> frontier;
    seen.insert({start.b, start.a});
    frontier.push_back(start);

    Lattice lat;
    while (!frontier.empty() && !lat.truncated) {
        const QuoteQ q = frontier.front();
        frontier.pop_front();
        for (const auto& m : mats) {
            const QuoteQ img = mat_apply(m, q);
            if (!in_domain(img, p)) continue;
            if (seen.contains({img.b, img.a})) continue;
            if (seen.size() >= max_states) {
                lat.truncated = true;
                break;
            }
            seen.insert({img.b, img.a});
            frontier.push_back(img);
        }
    }
    lat.states.reserve(seen.size());
    for (const auto& [b, a] : seen) lat.states.push_back({b, a});
    return lat;
}

DerivedProcesses derived_processes(const Trajectory& traj, const ParamsD&) {
    if (traj.crash) {
        std::ostringstream msg;
        msg << "trajectory crashed at t=" << traj.crash->t
            << "; even-time subsampling is undefined past the crash";
        throw std::domain_error(msg.str());
    }
    DerivedProcesses der;
    for (const TrajectoryStep& st : traj.steps)
        if (st.t % 2 == 0) der.even_states.emplace_back(st.t, st.q);
    der.eps.reserve(der.even_states.size());
    for (std::size_t i = 1; i < der.even_states.size(); ++i)
        der.eps.push_back(mid_price(der.even_states[i].second) -
                          mid_price(der.even_states[i - 1].second));
    der.eta.reserve(traj.steps.size());
    for (std::size_t i = 1; i < traj.steps.size(); ++i)
        der.eta.push_back(spread(traj.steps[i].q) / spread(traj.steps[i - 1].q));
    return der;
}

const char* proposition_name(Proposition which) {
    switch (which) {
        case Proposition::P1: return "P1";
        case Proposition::P3: return "P3";
        case Proposition::P4: return "P4";
        case Proposition::P5: return "P5";
        case Proposition::P6: return "P6";
    }
    throw std::logic_error("unreachable");
}

Proposition proposition_from_name(const std::string& name) {
    if (name == "P1") return Proposition::P1;
    if (name == "P3") return Proposition::P3;
    if (name == "P4") return Proposition::P4;
    if (name == "P5") return Proposition::P5;
    if (name == "P6") return Proposition::P6;
    throw ConfigError("unknown proposition '" + name + "' (expected P1, P3, P4, P5, or P6)");
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

QuoteD default_start(const ParamsD& p) {
    const KernelPolygon k = kernel_polygon(p);
    const KernelPolygon& poly = k.vertices.empty() ? domain_polygon(p) : k;
    QuoteD c{0, 0};
    for (const QuoteD& v : poly.vertices) {
        c.b += v.b;
        c.a += v.a;
    }
    c.b /= static_cast<double>(poly.vertices.size());
    c.a /= static_cast<double>(poly.vertices.size());
    return c;
}

QuoteD random_interior_quote(const ParamsD& p, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    const double b = u * (p.a_upper - p.s_lower);
    const double a = b + p.s_lower + v * (p.a_upper - b - p.s_lower);
    return {b, a};
}

void note(VerifyReport& rep, const std::string& line) { rep.notes.push_back(line); }

void check(VerifyReport& rep, bool ok, const std::string& what) {
    note(rep, std::string(ok ? "ok: " : "FAIL: ") + what);
    if (!ok) rep.passed = false;
}

void verify_p1(VerifyReport& rep, const ParamsD& p, const VerifyBudget& budget) {
    const double tol = 1e-12;
    const long long n = std::max<long long>(1, budget.n_traj);
    long long mismatches = 0;
    double worst = 0;
    for (long long i = 0; i < n; ++i) {
        std::mt19937_64 rng(substream_seed(budget.master_seed, static_cast<std::uint64_t>(i)));
        const QuoteD start = random_interior_quote(p, rng);
        for (TraderType ty : kAllTypes) {
            QuoteD q = start;
            bool clipped = false;
            for (int step = 0; step < 1000000 && !clipped; ++step) {
                const auto out = apply_type(q, ty, p);
                q = out.next;
                clipped = out.clipped;
            }
            const QuoteD want = constant_type_limit(start, ty, p);
            const double err = std::max(std::abs(q.b - want.b), std::abs(q.a - want.a));
            worst = std::max(worst, err);
            if (!clipped || err > tol) ++mismatches;
        }
    }
    check(rep, mismatches == 0,
          "constant-type runs from " + std::to_string(n) +
              " random starts crash at the closed-form points (worst error " + fmt(worst) + ")");
}

void verify_p3(VerifyReport& rep, const ParamsD& p, const VerifyBudget& budget) {
    const long long words = std::min<long long>(std::max<long long>(1, budget.n_traj), 50);
    const long long len = std::min<long long>(std::max<long long>(4, budget.steps), 200);
    // the double alpha is itself a dyadic rational, so the fallback is exact
    const Rat alpha = budget.alpha_exact.empty() ? Rat(p.alpha) : parse_rat(budget.alpha_exact);
    long long surviving = 0;
    long long irreducible = 0;
    for (long long i = 0; i < words; ++i) {
        const Trajectory traj =
            simulate(budget.start.value_or(default_start(p)), len, p,
                     substream_seed(budget.master_seed, static_cast<std::uint64_t>(i)));
        if (traj.crash) continue;
        ++surviving;
        TypeSequence word;
        for (const TrajectoryStep& st : traj.steps)
            if (st.type) word.push_back(*st.type);
        if (reduce_sequence(word, alpha, budget.max_block_len).size() == word.size())
            ++irreducible;
    }
    note(rep, std::to_string(surviving) + " of " + std::to_string(words) +
                  " sampled words survived " + std::to_string(len) + " steps");
    check(rep, surviving > 0, "at least one sampled word survives");
    check(rep, irreducible == 0,
          "every surviving word contains a deletable periodic block (" +
              std::to_string(irreducible) + " irreducible)");
}

void verify_p4(VerifyReport& rep, const ParamsD& p, const VerifyBudget& budget) {
    const QuoteD start = budget.start.value_or(default_start(p));
    rep.summary = monte_carlo(start, budget.steps, budget.n_traj, p, budget.master_seed);
    check(rep, rep.summary.n_crashes == 0,
          "no crashes in " + std::to_string(rep.summary.n_trajectories) + " trajectories (" +
              std::to_string(rep.summary.n_crashes) + " crashed)");
    check(rep, rep.summary.fraction_time_in_H <= budget.h_occupancy_max,
          "buffering-region occupancy " + fmt(rep.summary.fraction_time_in_H) + " <= " +
              fmt(budget.h_occupancy_max));
    check(rep, rep.summary.bound_violations == 0,
          "bid and ask stay under the kernel-range bounds (" +
              std::to_string(rep.summary.bound_violations) + " violations)");
}

struct PathAggregate {
    StabilitySummary sum;
    long long outside = 0;  // states off the required band
    long long total = 0;
    long long h_states = 0;
    bool first = true;

    void add(const QuoteD& q, const RegionLabels& lab, bool in_band) {
        ++total;
        if (lab.in_H) ++h_states;
        if (!in_band) ++outside;
        const double s = spread(q);
        if (first) {
            sum.max_b = q.b;
            sum.max_a = q.a;
            sum.min_spread = s;
            sum.max_spread = s;
            first = false;
        } else {
            sum.max_b = std::max(sum.max_b, q.b);
            sum.max_a = std::max(sum.max_a, q.a);
            sum.min_spread = std::min(sum.min_spread, s);
            sum.max_spread = std::max(sum.max_spread, s);
        }
    }

    void finish() {
        if (total > 0)
            sum.fraction_time_in_H = static_cast<double>(h_states) / static_cast<double>(total);
    }
};

// Margin for the band-membership assertions. Pinned orbits touch band
// boundaries exactly, so accumulated rounding of order 1e-11 over 1e5 steps
// must not flip a boundary contact into a counted excursion.
constexpr double kBandTol = 1e-9;

void verify_p5(VerifyReport& rep, const ParamsD& p, const VerifyBudget& budget) {
    const QuoteD start = budget.start.value_or(default_start(p));
    const double s_hi = std::pow(1 + p.alpha, 3) * p.s_lower;
    const double depth_lo = (1 + p.delta) * p.s_lower;
    const double depth_hi = (1 - p.epsilon) * (2 * p.a_upper - p.s_lower);
    PathAggregate agg;
    agg.sum.n_trajectories = budget.n_traj;
    for (long long i = 0; i < budget.n_traj; ++i) {
        const auto crash = run_path(
            start, budget.steps, p, substream_seed(budget.master_seed, static_cast<std::uint64_t>(i)),
            [&](long long, const QuoteD& q, std::optional<TraderType>, const RegionLabels& lab) {
                const double depth = q.b + q.a;
                agg.add(q, lab, depth >= depth_lo - kBandTol && depth <= depth_hi + kBandTol);
            });
        if (crash) ++agg.sum.n_crashes;
    }
    agg.finish();
    rep.summary = agg.sum;
    check(rep, agg.sum.n_crashes == 0,
          "no crashes (" + std::to_string(agg.sum.n_crashes) + " crashed)");
    check(rep, agg.sum.min_spread > p.s_lower && agg.sum.max_spread < s_hi,
          "all spreads strictly inside (" + fmt(p.s_lower) + ", " + fmt(s_hi) + ") (saw [" +
              fmt(agg.sum.min_spread) + ", " + fmt(agg.sum.max_spread) + "])");
    check(rep, agg.outside == 0,
          "every visited state stays in the mid band V2 (" + std::to_string(agg.outside) +
              " excursions)");
}

void verify_p6(VerifyReport& rep, const ParamsD& p, const VerifyBudget& budget) {
    const QuoteD start = budget.start.value_or(default_start(p));
    const double wing = p.alpha * (1 - p.gamma) * p.a_upper / 2;
    const double m_lo = (1 + p.delta) * p.s_lower / 2 - wing;
    const double m_hi = (1 - p.epsilon) * (p.a_upper - p.s_lower / 2) + wing;
    const double band_lo = (1 + p.alpha) * p.s_lower;
    const double band_hi = (1 - p.gamma) * p.a_upper;
    PathAggregate agg;
    agg.sum.n_trajectories = budget.n_traj;
    double min_m = 0, max_m = 0;
    bool first = true;
    for (long long i = 0; i < budget.n_traj; ++i) {
        const auto crash = run_path(
            start, budget.steps, p, substream_seed(budget.master_seed, static_cast<std::uint64_t>(i)),
            [&](long long, const QuoteD& q, std::optional<TraderType>, const RegionLabels& lab) {
                const double s = spread(q);
                agg.add(q, lab, s >= band_lo - kBandTol && s <= band_hi + kBandTol);
                const double m = mid_price(q);
                if (first) {
                    min_m = max_m = m;
                    first = false;
                } else {
                    min_m = std::min(min_m, m);
                    max_m = std::max(max_m, m);
                }
            });
        if (crash) ++agg.sum.n_crashes;
    }
    agg.finish();
    rep.summary = agg.sum;
    check(rep, agg.sum.n_crashes == 0,
          "no crashes (" + std::to_string(agg.sum.n_crashes) + " crashed)");
    check(rep, !first && min_m > m_lo && max_m < m_hi,
          "all mid-prices strictly inside (" + fmt(m_lo) + ", " + fmt(m_hi) + ") (saw [" +
              fmt(min_m) + ", " + fmt(max_m) + "])");
    check(rep, agg.outside == 0,
          "every visited state stays in the spread band U2 (" + std::to_string(agg.outside) +
              " excursions)");
}

}  // namespace

VerifyReport verify_proposition(const ParamsD& p, Proposition which, const VerifyBudget& budget) {
    VerifyReport rep;
    rep.which = which;
    const StabilityReport sr = stability_preconditions(p);

    const auto refuse = [&](const std::string& why) {
        rep.ran = false;
        rep.passed = false;
        note(rep, "refused: " + why);
    };

    switch (which) {
        case Proposition::P1:
        case Proposition::P3:
            break;  // no regime precondition beyond valid params
        case Proposition::P4:
            if (!sr.kernel_regime) {
                refuse("params are not in the kernel regime (min kernel range " +
                       fmt(std::min(sr.r_s_K.value_or(0), sr.r_m_K.value_or(0))) +
                       " must exceed " + fmt(sr.threshold) + ")");
                return rep;
            }
            break;
        case Proposition::P5:
            if (!sr.spread_pinned) {
                refuse("params are not in the pinned-spread regime (need r_s(U2) < " +
                       fmt(p.alpha * (1 + p.alpha) * p.s_lower) + " and r_m(V2) > " +
                       fmt(sr.threshold) + ")");
                return rep;
            }
            break;
        case Proposition::P6:
            if (!sr.mid_pinned) {
                refuse("params are not in the pinned-mid regime (need r_m(V2) < " +
                       fmt(p.alpha * (1 + p.alpha) * p.s_lower / 2) + " and r_s(U2) > " +
                       fmt(sr.threshold) + ")");
                return rep;
            }
            break;
    }

    rep.ran = true;
    rep.passed = true;
    switch (which) {
        case Proposition::P1: verify_p1(rep, p, budget); break;
        case Proposition::P3: verify_p3(rep, p, budget); break;
        case Proposition::P4: verify_p4(rep, p, budget); break;
        case Proposition::P5: verify_p5(rep, p, budget); break;
        case Proposition::P6: verify_p6(rep, p, budget); break;
    }
    return rep;
}

}  // namespace lobsim
