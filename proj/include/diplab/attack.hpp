#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ideal.hpp"
#include "linalg.hpp"
#include "protocol.hpp"

// What a corrupted P2 can do with its view. Every completed session hands
// P2 one linear constraint on P1's input:
//
//   <x.y0> = <x1.y0> - s0
//
// since x1 = x + x0 and s0 = <x0.y0>. For k = 1 that constraint alone
// recovers P1's scalar whenever y0 != 0; across composed sessions the
// constraints stack into the system x * Y0 = q0, solved exactly. The same
// equation doubles as a perfect real-vs-ideal distinguisher: it holds in
// every real view but only by chance (rate 1/q) in a view assembled without
// knowledge of x.
namespace diplab {

// One leaked constraint: <x.coeffs> = rhs for P1's true input x.
struct LinearEquation {
    FieldVector coeffs; // = y0 of the run
    FieldElement rhs;   // = <x1.y0> - s0

    bool satisfied_by(const FieldVector& x) const { return inner_product(x, coeffs) == rhs; }

    friend bool operator==(const LinearEquation&, const LinearEquation&) = default;
};

inline LinearEquation extract_equation(const P2View& view)
{
    return LinearEquation{view.y0, inner_product(view.x1, view.y0) - view.s0};
}

// Total break for k = 1: x = (<x1.y0> - s0) / y0. Undetermined (nullopt)
// only when the mask y0 is zero, which happens with probability 1/q.
inline std::optional<FieldElement> recover_k1(const P2View& view)
{
    if (view.y0.size() != 1) throw std::invalid_argument("recover_k1: view must come from a k=1 session");
    const LinearEquation eq = extract_equation(view);
    if (eq.coeffs[0].is_zero()) return std::nullopt;
    return eq.rhs * eq.coeffs[0].inv();
}

// The accumulated constraints of several sessions: column i of Y0 is the
// i-th session's mask y0, element i of q0 its leaked right-hand side, so
// P1's input satisfies x * Y0 = q0.
struct LinearSystem {
    FieldMatrix Y0;
    FieldVector q0;

    friend bool operator==(const LinearSystem&, const LinearSystem&) = default;
};

inline LinearSystem build_system(const std::vector<P2View>& views)
{
    if (views.empty()) throw std::invalid_argument("build_system: at least one view required");
    const std::size_t k = views.front().y0.size();
    const Modulus q = views.front().y0.modulus();
    std::vector<FieldVector> columns;
    std::vector<FieldElement> rhs;
    columns.reserve(views.size());
    rhs.reserve(views.size());
    for (const auto& view : views) {
        if (view.y0.size() != k || !(view.y0.modulus() == q))
            throw std::invalid_argument("build_system: views disagree on k or q");
        const LinearEquation eq = extract_equation(view);
        columns.push_back(eq.coeffs);
        rhs.push_back(eq.rhs);
    }
    return LinearSystem{FieldMatrix::from_columns(columns), FieldVector(std::move(rhs))};
}

// Outcome of solving the accumulated system. Unique means total input
// recovery; Partial retains the whole affine candidate set (the true input
// is always a member); None can only arise from views that were not all
// produced against the same honest input.
struct RecoveryResult {
    enum class Kind { Unique, Partial, None };

    Kind kind;
    std::optional<FieldVector> recovered;
    std::optional<SolutionSet> solution_set;
    LinearSystem system;
};

inline RecoveryResult recover_input(const std::vector<P2View>& views)
{
    LinearSystem system = build_system(views);
    // x * Y0 = q0, transposed to the solver's convention Y0^T x^T = q0^T.
    SolutionSet sol = solve(system.Y0.transposed(), system.q0);
    switch (sol.kind) {
    case SolutionSet::Kind::Unique:
        return RecoveryResult{RecoveryResult::Kind::Unique, sol.particular, std::nullopt, std::move(system)};
    case SolutionSet::Kind::Affine:
        return RecoveryResult{RecoveryResult::Kind::Partial, std::nullopt, std::move(sol), std::move(system)};
    default:
        return RecoveryResult{RecoveryResult::Kind::None, std::nullopt, std::move(sol), std::move(system)};
    }
}

// The candidate simulator for a corrupted P2: it knows only P2's input and
// output, so it fills the rest of the view with fresh uniform randomness
// and back-solves r1 to keep the view output-consistent.
using SimulatedP2View = P2View;

inline SimulatedP2View straw_simulate(const FieldVector& y, FieldElement w2, Rng& rng)
{
    const Modulus q = y.modulus();
    const std::size_t k = y.size();
    FieldVector y0 = sample_vector(rng, q, k);
    FieldVector x1 = sample_vector(rng, q, k);
    FieldElement s0 = rng.sample(q);
    const FieldElement r1 = w2 - inner_product(x1, y0) + s0;
    return SimulatedP2View{y, std::move(y0), s0, std::move(x1), r1, w2};
}

// The environment's test: it chose x, so it checks the leaked identity.
// Accepts every real view; accepts a straw-simulated view only when the
// uniform right-hand side happens to match, i.e. with probability 1/q.
inline bool distinguish(const P2View& view, const FieldVector& x)
{
    return extract_equation(view).satisfied_by(x);
}

struct AdvantageReport {
    std::uint64_t trials;
    double real_accept_rate;
    double ideal_accept_rate;
    double advantage; // = real_accept_rate - ideal_accept_rate
    std::uint32_t q;
    std::size_t k;
    std::uint64_t seed;
};

namespace detail {

// Splits [0, trials) across threads. Each trial derives its own seed, so
// the tallies are identical no matter how the range is chunked.
template <typename PerTrial>
void run_trials(std::uint64_t trials, unsigned threads, PerTrial&& per_trial)
{
    if (threads <= 1) {
        for (std::uint64_t t = 0; t < trials; ++t) per_trial(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
        const std::uint64_t lo = i * chunk;
        const std::uint64_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &per_trial] {
            for (std::uint64_t t = lo; t < hi; ++t) per_trial(t);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// One real session and one ideal-plus-simulated view per trial, fresh
// uniform inputs each time, both judged by the same distinguisher.
inline AdvantageReport run_distinguisher_experiment(Modulus q, std::size_t k, std::uint64_t trials,
                                                    std::uint64_t seed, unsigned threads = 1)
{
    if (trials == 0) throw std::invalid_argument("run_distinguisher_experiment: trials must be >= 1");
    if (k == 0) throw std::invalid_argument("run_distinguisher_experiment: k must be >= 1");

    std::atomic<std::uint64_t> real_accepts{0}, ideal_accepts{0};
    detail::run_trials(trials, threads, [&](std::uint64_t t) {
        Rng rng(mix_seed(seed, t));
        const FieldVector x = sample_vector(rng, q, k);
        const FieldVector y = sample_vector(rng, q, k);

        const SessionRecord real = run_session_recorded(x, y, k, q, rng);
        if (distinguish(*real.p2_view, x)) real_accepts.fetch_add(1, std::memory_order_relaxed);

        const IdealOutcome ideal = ideal_dip(x.raw_values(), y.raw_values(), k, q, rng);
        const SimulatedP2View simulated = straw_simulate(y, *ideal.w2, rng);
        if (distinguish(simulated, x)) ideal_accepts.fetch_add(1, std::memory_order_relaxed);
    });

    const double real_rate = static_cast<double>(real_accepts.load()) / static_cast<double>(trials);
    const double ideal_rate = static_cast<double>(ideal_accepts.load()) / static_cast<double>(trials);
    return AdvantageReport{trials, real_rate, ideal_rate, real_rate - ideal_rate, q.value(), k, seed};
}

} // namespace diplab
