#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "attack.hpp"
#include "protocol.hpp"

// Shared vector-by-matrix multiplication built from independent protocol
// sessions: to share w = x * Y, session i runs the protocol on P1's x and
// column i of Y, with fresh preprocessing every time. Each session hands P2
// one more constraint on x, so a square composition lets P2 recover x
// outright whenever the stacked masks are nonsingular.
namespace diplab {

// Additive shares of x * Y plus everything P2 saw along the way. On a
// composed abort the share vectors are absent and the views collected so
// far are retained for analysis.
struct VecMatShares {
    bool aborted;
    std::optional<FieldVector> w1;
    std::optional<FieldVector> w2;
    std::vector<P2View> views;
};

// Test seam: lets a caller corrupt the messages of chosen sessions in
// transit, which is the only way an in-process honest composition can hit
// the abort path.
struct SessionTamper {
    std::function<void(Msg1&, std::size_t session)> msg1;
    std::function<void(Msg2&, std::size_t session)> msg2;
};

inline VecMatShares shared_vec_mat(const FieldVector& x, const FieldMatrix& Y, Modulus q, Rng& rng,
                                   const SessionTamper& tamper = {})
{
    if (x.size() != Y.rows()) throw std::invalid_argument("shared_vec_mat: dimension mismatch");
    if (!(x.modulus() == q) || !(Y.modulus() == q)) throw std::invalid_argument("shared_vec_mat: modulus mismatch");

    const std::size_t k = x.size();
    const std::size_t n = Y.cols();
    // Per-session seeds derived up front: sessions are independent and could
    // just as well run in parallel.
    const std::uint64_t base = rng.next_u64();

    std::vector<FieldElement> w1, w2;
    std::vector<P2View> views;
    w1.reserve(n);
    w2.reserve(n);
    views.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        Rng session_rng(mix_seed(base, i));
        auto [setup1, setup2] = preprocess(k, q, session_rng);

        PartyP1 p1(x);
        PartyP2 p2(Y.column(i));
        p1.on_setup(std::move(setup1));
        p2.on_setup(std::move(setup2));

        Msg1 msg1 = p2.round1();
        if (tamper.msg1) tamper.msg1(msg1, i);
        std::optional<Msg2> msg2 = p1.on_msg1(msg1, session_rng);
        if (!msg2) return VecMatShares{true, std::nullopt, std::nullopt, std::move(views)};
        if (tamper.msg2) tamper.msg2(*msg2, i);
        const PartyOutput out2 = p2.on_msg2(*msg2);
        if (!out2) return VecMatShares{true, std::nullopt, std::nullopt, std::move(views)};

        w1.push_back(*p1.output());
        w2.push_back(*out2);
        views.push_back(p2.view());
    }

    return VecMatShares{false, FieldVector(std::move(w1)), FieldVector(std::move(w2)), std::move(views)};
}

// Recovers P1's input from a completed square composition. With n > k
// sessions the first k views are used; more equations only help, the fixed
// selection just keeps the result deterministic.
inline RecoveryResult attack_shared_vec_mat(const VecMatShares& shares)
{
    if (shares.aborted) throw std::invalid_argument("attack_shared_vec_mat: composition aborted");
    if (shares.views.empty()) throw std::invalid_argument("attack_shared_vec_mat: no views");
    const std::size_t k = shares.views.front().y0.size();
    if (shares.views.size() < k)
        throw std::invalid_argument("attack_shared_vec_mat: need at least k views for a square system");
    const std::vector<P2View> first_k(shares.views.begin(), shares.views.begin() + static_cast<std::ptrdiff_t>(k));
    return recover_input(first_k);
}

} // namespace diplab
