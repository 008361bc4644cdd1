#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

#include "linalg.hpp"

// The two-party inner-product sharing protocol in the trusted-initializer
// model. A preprocessing phase hands P1 a mask vector x0 and P2 the pair
// (y0, s0 = <x0.y0>); the computation phase is one message in each
// direction. Parties are explicit state machines so a test, a transport, or
// an attacker can interpose on the messages. All incoming payloads are raw
// integers until the receiver's membership check passes; a failed check
// aborts with the lambda output, never a field-arithmetic fault.
namespace diplab {

// Correlated randomness for one session.
struct SetupP1 {
    FieldVector x0;
    friend bool operator==(const SetupP1&, const SetupP1&) = default;
};

struct SetupP2 {
    FieldVector y0;
    FieldElement s0; // = <x0.y0> for the x0 delivered to P1 in this session
    friend bool operator==(const SetupP2&, const SetupP2&) = default;
};

// P2 -> P1: the masked input y1 = y - y0, unvalidated on receipt.
struct Msg1 {
    RawVec y1;
    friend bool operator==(const Msg1&, const Msg1&) = default;
};

// P1 -> P2: the masked input x1 = x + x0 and the blinded term
// r1 = <x.y1> - r, unvalidated on receipt.
struct Msg2 {
    RawVec x1;
    RawValue r1;
    friend bool operator==(const Msg2&, const Msg2&) = default;
};

// Everything observable about one session.
struct Transcript {
    Modulus q;
    std::size_t k;
    SetupP1 setup1;
    SetupP2 setup2;
    Msg1 msg1;
    std::optional<Msg2> msg2; // absent when P1 aborted
    PartyOutput outcome1;
    PartyOutput outcome2;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

// What a corrupted P2 holds after one completed session with an honest P1:
// its own input and setup, plus P1's message post-validation and the output.
struct P2View {
    FieldVector y;
    FieldVector y0;
    FieldElement s0;
    FieldVector x1;
    FieldElement r1;
    FieldElement w2;

    friend bool operator==(const P2View&, const P2View&) = default;
};

inline std::pair<SetupP1, SetupP2> preprocess(std::size_t k, Modulus q, Rng& rng)
{
    if (k == 0) throw std::invalid_argument("preprocess: k must be >= 1");
    FieldVector x0 = sample_vector(rng, q, k);
    FieldVector y0 = sample_vector(rng, q, k);
    const FieldElement s0 = inner_product(x0, y0);
    return {SetupP1{std::move(x0)}, SetupP2{std::move(y0), s0}};
}

inline Msg1 p2_round1(const FieldVector& y, const SetupP2& setup2)
{
    return Msg1{(y - setup2.y0).raw_values()};
}

struct P1Round2Result {
    Msg2 msg2;
    FieldElement w1;
};

// P1's round: membership check on the incoming y1, then
// x1 = x + x0, r1 = <x.y1> - r, output w1 = r. Nullopt is the abort.
inline std::optional<P1Round2Result> p1_round2(const FieldVector& x, const SetupP1& setup1, const Msg1& msg1,
                                               FieldElement r)
{
    detail::check_same_shape(x, setup1.x0, "p1_round2 setup");
    if (!(r.modulus() == x.modulus())) throw std::invalid_argument("p1_round2: r modulus mismatch");
    const auto y1 = to_field_vector(msg1.y1, x.size(), x.modulus());
    if (!y1) return std::nullopt;
    const FieldVector x1 = x + setup1.x0;
    const FieldElement r1 = inner_product(x, *y1) - r;
    return P1Round2Result{Msg2{x1.raw_values(), r1.value()}, r};
}

inline std::optional<P1Round2Result> p1_round2(const FieldVector& x, const SetupP1& setup1, const Msg1& msg1,
                                               Rng& rng)
{
    detail::check_same_shape(x, setup1.x0, "p1_round2 setup");
    if (!to_field_vector(msg1.y1, x.size(), x.modulus())) return std::nullopt;
    return p1_round2(x, setup1, msg1, rng.sample(x.modulus()));
}

// P2's final step: membership checks on x1 and r1, then
// w2 = <x1.y0> + r1 - s0. Nullopt is the abort.
inline PartyOutput p2_finish(const SetupP2& setup2, const Msg2& msg2)
{
    const Modulus q = setup2.y0.modulus();
    const auto x1 = to_field_vector(msg2.x1, setup2.y0.size(), q);
    if (!x1 || !is_field_value(msg2.r1, q)) return std::nullopt;
    const FieldElement r1(static_cast<std::uint32_t>(msg2.r1), q);
    return inner_product(*x1, setup2.y0) + r1 - setup2.s0;
}

// P1's session state machine: AwaitSetup -> AwaitMsg1 -> Done | Aborted.
class PartyP1 {
public:
    enum class State { AwaitSetup, AwaitMsg1, Done, Aborted };

    explicit PartyP1(FieldVector x) : x_(std::move(x)) {}

    void on_setup(SetupP1 setup)
    {
        require_state(State::AwaitSetup, "on_setup");
        detail::check_same_shape(x_, setup.x0, "PartyP1 setup");
        setup_ = std::move(setup);
        state_ = State::AwaitMsg1;
    }

    std::optional<Msg2> on_msg1(const Msg1& msg1, FieldElement r)
    {
        require_state(State::AwaitMsg1, "on_msg1");
        return handle_msg1(p1_round2(x_, *setup_, msg1, r));
    }

    std::optional<Msg2> on_msg1(const Msg1& msg1, Rng& rng)
    {
        require_state(State::AwaitMsg1, "on_msg1");
        return handle_msg1(p1_round2(x_, *setup_, msg1, rng));
    }

    State state() const { return state_; }
    const FieldVector& input() const { return x_; }

    PartyOutput output() const
    {
        if (state_ != State::Done && state_ != State::Aborted)
            throw std::logic_error("PartyP1::output: session not finished");
        return w1_;
    }

private:
    std::optional<Msg2> handle_msg1(std::optional<P1Round2Result> result)
    {
        if (!result) {
            state_ = State::Aborted;
            w1_ = std::nullopt;
            return std::nullopt;
        }
        state_ = State::Done;
        w1_ = result->w1;
        return std::move(result->msg2);
    }

    void require_state(State expected, const char* op) const
    {
        if (state_ != expected) throw std::logic_error(std::string("PartyP1::") + op + ": wrong state");
    }

    FieldVector x_;
    std::optional<SetupP1> setup_;
    State state_ = State::AwaitSetup;
    PartyOutput w1_;
};

// P2's session state machine: AwaitSetup -> SendMsg1 -> AwaitMsg2 ->
// Done | Aborted.
class PartyP2 {
public:
    enum class State { AwaitSetup, SendMsg1, AwaitMsg2, Done, Aborted };

    explicit PartyP2(FieldVector y) : y_(std::move(y)) {}

    void on_setup(SetupP2 setup)
    {
        require_state(State::AwaitSetup, "on_setup");
        detail::check_same_shape(y_, setup.y0, "PartyP2 setup");
        setup_ = std::move(setup);
        state_ = State::SendMsg1;
    }

    Msg1 round1()
    {
        require_state(State::SendMsg1, "round1");
        state_ = State::AwaitMsg2;
        return p2_round1(y_, *setup_);
    }

    PartyOutput on_msg2(const Msg2& msg2)
    {
        require_state(State::AwaitMsg2, "on_msg2");
        w2_ = p2_finish(*setup_, msg2);
        if (!w2_) {
            state_ = State::Aborted;
            return std::nullopt;
        }
        x1_ = to_field_vector(msg2.x1, y_.size(), y_.modulus());
        r1_ = FieldElement(static_cast<std::uint32_t>(msg2.r1), y_.modulus());
        state_ = State::Done;
        return w2_;
    }

    State state() const { return state_; }
    const FieldVector& input() const { return y_; }

    PartyOutput output() const
    {
        if (state_ != State::Done && state_ != State::Aborted)
            throw std::logic_error("PartyP2::output: session not finished");
        return w2_;
    }

    P2View view() const
    {
        if (state_ != State::Done) throw std::logic_error("PartyP2::view: session not completed");
        return P2View{y_, setup_->y0, setup_->s0, *x1_, *r1_, *w2_};
    }

private:
    void require_state(State expected, const char* op) const
    {
        if (state_ != expected) throw std::logic_error(std::string("PartyP2::") + op + ": wrong state");
    }

    FieldVector y_;
    std::optional<SetupP2> setup_;
    std::optional<FieldVector> x1_;
    std::optional<FieldElement> r1_;
    State state_ = State::AwaitSetup;
    PartyOutput w2_;
};

// One session's transcript plus P2's assembled view (absent on abort).
struct SessionRecord {
    Transcript transcript;
    std::optional<P2View> p2_view;
};

namespace detail {

template <typename RandomnessForP1>
SessionRecord drive_session(const FieldVector& x, const FieldVector& y, SetupP1 setup1, SetupP2 setup2,
                            RandomnessForP1&& r_or_rng)
{
    check_same_shape(x, y, "run_session inputs");
    PartyP1 p1(x);
    PartyP2 p2(y);
    p1.on_setup(setup1);
    p2.on_setup(setup2);
    Msg1 msg1 = p2.round1();
    std::optional<Msg2> msg2 = p1.on_msg1(msg1, r_or_rng);
    Transcript t{x.modulus(), x.size(),       std::move(setup1), std::move(setup2),
                 std::move(msg1), std::nullopt, p1.output(),       std::nullopt};
    if (!msg2) return SessionRecord{std::move(t), std::nullopt};
    const PartyOutput w2 = p2.on_msg2(*msg2);
    t.msg2 = std::move(msg2);
    t.outcome2 = w2;
    std::optional<P2View> view;
    if (w2) view = p2.view();
    return SessionRecord{std::move(t), std::move(view)};
}

} // namespace detail

inline SessionRecord run_session_with(const FieldVector& x, const FieldVector& y, SetupP1 setup1, SetupP2 setup2,
                                      FieldElement r)
{
    return detail::drive_session(x, y, std::move(setup1), std::move(setup2), r);
}

inline SessionRecord run_session_with(const FieldVector& x, const FieldVector& y, SetupP1 setup1, SetupP2 setup2,
                                      Rng& rng)
{
    return detail::drive_session(x, y, std::move(setup1), std::move(setup2), rng);
}

inline SessionRecord run_session_recorded(const FieldVector& x, const FieldVector& y, std::size_t k, Modulus q,
                                          Rng& rng)
{
    if (x.size() != k || y.size() != k) throw std::invalid_argument("run_session: inputs must have length k");
    if (!(x.modulus() == q) || !(y.modulus() == q)) throw std::invalid_argument("run_session: modulus mismatch");
    auto [setup1, setup2] = preprocess(k, q, rng);
    return run_session_with(x, y, std::move(setup1), std::move(setup2), rng);
}

inline Transcript run_session(const FieldVector& x, const FieldVector& y, std::size_t k, Modulus q, Rng& rng)
{
    return run_session_recorded(x, y, k, q, rng).transcript;
}

// Zero-extension of a length-k' input to length k, for running a shorter
// inner product through a longer protocol instance.
inline FieldVector pad_inputs(const FieldVector& input, std::size_t k)
{
    if (input.size() > k) throw std::invalid_argument("pad_inputs: input longer than target length");
    if (input.size() == k) return input;
    FieldVector out(input.modulus(), k);
    for (std::size_t i = 0; i < input.size(); ++i) out.set(i, input[i]);
    return out;
}

inline SessionRecord run_padded_session_recorded(const FieldVector& x, const FieldVector& y, std::size_t k,
                                                 Modulus q, Rng& rng)
{
    detail::check_same_shape(x, y, "run_padded_session inputs");
    return run_session_recorded(pad_inputs(x, k), pad_inputs(y, k), k, q, rng);
}

inline Transcript run_padded_session(const FieldVector& x, const FieldVector& y, std::size_t k, Modulus q, Rng& rng)
{
    return run_padded_session_recorded(x, y, k, q, rng).transcript;
}

} // namespace diplab
