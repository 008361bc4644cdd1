#pragma once

#include <cstddef>

#include "linalg.hpp"

// Trusted-third-party reference for the distributed inner product. On valid
// inputs P1 receives a uniform mask u and P2 receives <x1.x2> - u, so the
// shares are additive and each party's marginal carries no information about
// the other party's input. Any membership failure aborts both parties.
namespace diplab {

struct IdealOutcome {
    PartyOutput w1;
    PartyOutput w2;

    bool aborted() const { return !w1.has_value(); }

    friend bool operator==(const IdealOutcome&, const IdealOutcome&) = default;
};

// Core with the mask u fixed by the caller. Inputs are raw (pre-validation)
// on purpose: the abort path must be reachable.
inline IdealOutcome ideal_dip(const RawVec& x1, const RawVec& x2, std::size_t k, Modulus q, FieldElement u)
{
    if (!(u.modulus() == q)) throw std::invalid_argument("ideal_dip: mask modulus mismatch");
    const auto v1 = to_field_vector(x1, k, q);
    const auto v2 = to_field_vector(x2, k, q);
    if (!v1 || !v2) return IdealOutcome{std::nullopt, std::nullopt};
    const FieldElement w2 = inner_product(*v1, *v2) - u;
    return IdealOutcome{u, w2};
}

inline IdealOutcome ideal_dip(const RawVec& x1, const RawVec& x2, std::size_t k, Modulus q, Rng& rng)
{
    // Membership first: the mask is only drawn on the non-abort path.
    if (!to_field_vector(x1, k, q) || !to_field_vector(x2, k, q))
        return IdealOutcome{std::nullopt, std::nullopt};
    return ideal_dip(x1, x2, k, q, rng.sample(q));
}

} // namespace diplab
