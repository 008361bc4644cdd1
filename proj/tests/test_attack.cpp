#include <catch2/catch_amalgamated.hpp>

#include <diplab/attack.hpp>

#include "support/oracle.hpp"
#include "support/stats.hpp"

using namespace diplab;

namespace {

const Modulus kQ2(2);
const Modulus kQ7(7);
const Modulus kQ101(101);

// A completed honest session against known inputs and masks, returning P2's
// view. r is irrelevant to the attack; any value works.
P2View forced_view(const FieldVector& x, const FieldVector& y, const FieldVector& x0, const FieldVector& y0)
{
    const SetupP1 setup1{x0};
    const SetupP2 setup2{y0, inner_product(x0, y0)};
    const SessionRecord record = run_session_with(x, y, setup1, setup2, FieldElement::zero(x.modulus()));
    REQUIRE(record.p2_view.has_value());
    return *record.p2_view;
}

} // namespace

TEST_CASE("the worked session leaks the worked equation", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {1, 2}), FieldVector::of(kQ7, {3, 4}),
                                    FieldVector::of(kQ7, {5, 6}), FieldVector::of(kQ7, {2, 3}));
    const LinearEquation eq = extract_equation(view);
    REQUIRE(eq.coeffs == FieldVector::of(kQ7, {2, 3}));
    REQUIRE(eq.rhs == FieldElement(1, kQ7)); // <(6,1).(2,3)> - 0 = 15 = 1
    REQUIRE(eq.satisfied_by(FieldVector::of(kQ7, {1, 2}))); // <(1,2).(2,3)> = 8 = 1
}

TEST_CASE("a zero mask yields the vacuous equation, still returned", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {1, 2}), FieldVector::of(kQ7, {3, 4}),
                                    FieldVector::of(kQ7, {5, 6}), FieldVector::of(kQ7, {0, 0}));
    const LinearEquation eq = extract_equation(view);
    REQUIRE(eq.coeffs.is_zero());
    REQUIRE(eq.rhs == FieldElement(0, kQ7));
    REQUIRE(eq.satisfied_by(FieldVector::of(kQ7, {6, 6}))); // vacuously true for anything
}

TEST_CASE("every honest view's equation is satisfied by the true input", "[attack]")
{
    Rng rng(101);
    for (std::uint64_t qv : {2ull, 7ull, 101ull}) {
        const Modulus q(qv);
        for (std::size_t k : {1, 3, 8}) {
            for (int i = 0; i < 60; ++i) {
                const FieldVector x = sample_vector(rng, q, k);
                const FieldVector y = sample_vector(rng, q, k);
                const SessionRecord record = run_session_recorded(x, y, k, q, rng);
                REQUIRE(extract_equation(*record.p2_view).satisfied_by(x));
            }
        }
    }
}

TEST_CASE("k=1 recovery reproduces the worked example", "[attack]")
{
    // q=7, x=3, x0=2, y0=4: s0=1, x1=5, rhs = 20-1 = 5, 5*inv(4) = 10 = 3.
    const P2View view = forced_view(FieldVector::of(kQ7, {3}), FieldVector::of(kQ7, {6}),
                                    FieldVector::of(kQ7, {2}), FieldVector::of(kQ7, {4}));
    REQUIRE(view.s0 == FieldElement(1, kQ7));
    REQUIRE(view.x1 == FieldVector::of(kQ7, {5}));
    const auto recovered = recover_k1(view);
    REQUIRE(recovered.has_value());
    REQUIRE(*recovered == FieldElement(3, kQ7));
}

TEST_CASE("k=1 recovery is undetermined only for the zero mask", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {3}), FieldVector::of(kQ7, {6}),
                                    FieldVector::of(kQ7, {2}), FieldVector::of(kQ7, {0}));
    REQUIRE_FALSE(recover_k1(view).has_value());
}

TEST_CASE("k=1 recovery rejects longer views", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {1, 2}), FieldVector::of(kQ7, {3, 4}),
                                    FieldVector::of(kQ7, {5, 6}), FieldVector::of(kQ7, {2, 3}));
    REQUIRE_THROWS_AS(recover_k1(view), std::invalid_argument);
}

TEST_CASE("k=1 recovery succeeds at rate about 1 - 1/q and never returns a wrong value", "[attack][stats]")
{
    Rng rng(202);
    const std::uint64_t trials = 2000;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const FieldVector x = sample_vector(rng, kQ101, 1);
        const FieldVector y = sample_vector(rng, kQ101, 1);
        const SessionRecord record = run_session_recorded(x, y, 1, kQ101, rng);
        const auto recovered = recover_k1(*record.p2_view);
        if (recovered) {
            REQUIRE(*recovered == x[0]); // a successful recovery is always exact
            ++hits;
        }
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(trials);
    REQUIRE(testsupport::within_3_sigma(rate, 1.0 - 1.0 / 101.0, trials));
}

TEST_CASE("unit-vector masks make the system the identity", "[attack]")
{
    const FieldVector x = FieldVector::of(kQ7, {4, 2});
    const FieldVector y = FieldVector::of(kQ7, {3, 4});
    const std::vector<P2View> views{
        forced_view(x, y, FieldVector::of(kQ7, {1, 1}), FieldVector::of(kQ7, {1, 0})),
        forced_view(x, y, FieldVector::of(kQ7, {2, 5}), FieldVector::of(kQ7, {0, 1})),
    };
    const LinearSystem system = build_system(views);
    REQUIRE(system.Y0 == FieldMatrix::identity(kQ7, 2));
    REQUIRE(system.q0 == x); // rhs_i = <x.e_i> = x_i
}

TEST_CASE("a single k=1 view builds recover_k1's equation", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {3}), FieldVector::of(kQ7, {6}),
                                    FieldVector::of(kQ7, {2}), FieldVector::of(kQ7, {4}));
    const LinearSystem system = build_system({view});
    const LinearEquation eq = extract_equation(view);
    REQUIRE(system.Y0.at(0, 0) == eq.coeffs[0]);
    REQUIRE(system.q0[0] == eq.rhs);
    REQUIRE(*recover_k1(view) == system.q0[0] * system.Y0.at(0, 0).inv());
}

TEST_CASE("duplicate views give a rank-deficient system", "[attack]")
{
    const P2View view = forced_view(FieldVector::of(kQ7, {1, 2}), FieldVector::of(kQ7, {3, 4}),
                                    FieldVector::of(kQ7, {5, 6}), FieldVector::of(kQ7, {2, 3}));
    const LinearSystem system = build_system({view, view});
    REQUIRE(rank(system.Y0) == 1);
    const RecoveryResult result = recover_input({view, view});
    REQUIRE(result.kind == RecoveryResult::Kind::Partial);
}

TEST_CASE("build_system rejects inconsistent views", "[attack]")
{
    const P2View a = forced_view(FieldVector::of(kQ7, {3}), FieldVector::of(kQ7, {6}),
                                 FieldVector::of(kQ7, {2}), FieldVector::of(kQ7, {4}));
    const P2View b = forced_view(FieldVector::of(kQ7, {1, 2}), FieldVector::of(kQ7, {3, 4}),
                                 FieldVector::of(kQ7, {5, 6}), FieldVector::of(kQ7, {2, 3}));
    REQUIRE_THROWS_AS(build_system({a, b}), std::invalid_argument);
    REQUIRE_THROWS_AS(build_system({}), std::invalid_argument);
}

TEST_CASE("nonsingular masks recover the exact input", "[attack]")
{
    Rng rng(303);
    int uniques = 0;
    for (int i = 0; i < 200; ++i) {
        const FieldVector x = sample_vector(rng, kQ101, 4);
        const FieldVector y = sample_vector(rng, kQ101, 4);
        std::vector<P2View> views;
        for (int s = 0; s < 4; ++s)
            views.push_back(*run_session_recorded(x, y, 4, kQ101, rng).p2_view);
        const RecoveryResult result = recover_input(views);
        if (result.kind == RecoveryResult::Kind::Unique) {
            REQUIRE(*result.recovered == x);
            ++uniques;
        } else {
            REQUIRE(result.kind == RecoveryResult::Kind::Partial);
        }
    }
    REQUIRE(uniques > 150); // expected fraction about 0.96 at q=101, k=4
}

TEST_CASE("all-zero masks leave the whole space as candidates", "[attack]")
{
    const FieldVector x = FieldVector::of(kQ2, {1, 0});
    const FieldVector y = FieldVector::of(kQ2, {1, 1});
    const FieldVector zero(kQ2, 2);
    const std::vector<P2View> views{
        forced_view(x, y, FieldVector::of(kQ2, {1, 1}), zero),
        forced_view(x, y, FieldVector::of(kQ2, {0, 1}), zero),
    };
    const RecoveryResult result = recover_input(views);
    REQUIRE(result.kind == RecoveryResult::Kind::Partial);
    REQUIRE(result.solution_set->rank == 0);
    const auto candidates = testsupport::enumerate_solution_set(*result.solution_set);
    REQUIRE(candidates.size() == 4); // all of F_2^2
}

TEST_CASE("partial recovery always contains the true input", "[attack]")
{
    Rng rng(404);
    int partials = 0;
    while (partials < 30) {
        const FieldVector x = sample_vector(rng, kQ2, 3);
        const FieldVector y = sample_vector(rng, kQ2, 3);
        std::vector<P2View> views;
        for (int s = 0; s < 3; ++s)
            views.push_back(*run_session_recorded(x, y, 3, kQ2, rng).p2_view);
        const RecoveryResult result = recover_input(views);
        if (result.kind != RecoveryResult::Kind::Partial) continue;
        ++partials;
        bool found = false;
        for (const auto& cand : testsupport::enumerate_solution_set(*result.solution_set))
            if (cand == x) found = true;
        REQUIRE(found);
    }
}

TEST_CASE("unique recovery frequency tracks the nonsingularity rate", "[attack][stats]")
{
    // (q=2, k=2): exactly 6 of 16 mask matrices are nonsingular = 0.375,
    // verified by the exhaustive oracle in the linalg tests.
    Rng rng(505);
    const std::uint64_t trials = 4000;
    std::uint64_t uniques = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const FieldVector x = sample_vector(rng, kQ2, 2);
        const FieldVector y = sample_vector(rng, kQ2, 2);
        std::vector<P2View> views;
        for (int s = 0; s < 2; ++s)
            views.push_back(*run_session_recorded(x, y, 2, kQ2, rng).p2_view);
        if (recover_input(views).kind == RecoveryResult::Kind::Unique) ++uniques;
    }
    const double rate = static_cast<double>(uniques) / static_cast<double>(trials);
    REQUIRE(testsupport::within_3_sigma(rate, 0.375, trials));
}

TEST_CASE("straw-simulated views are output-consistent by construction", "[attack]")
{
    Rng rng(606);
    for (int i = 0; i < 500; ++i) {
        const FieldVector y = sample_vector(rng, kQ101, 3);
        const FieldElement w2 = rng.sample(kQ101);
        const SimulatedP2View sim = straw_simulate(y, w2, rng);
        REQUIRE(sim.w2 == w2);
        REQUIRE(sim.y == y);
        REQUIRE(inner_product(sim.x1, sim.y0) + sim.r1 - sim.s0 == w2);
    }
}

TEST_CASE("straw-simulator marginals are uniform", "[attack][stats]")
{
    Rng rng(707);
    const FieldVector y = FieldVector::of(kQ101, {9});
    std::vector<std::uint64_t> y0_counts(101, 0), x1_counts(101, 0), s0_counts(101, 0);
    for (int i = 0; i < 100000; ++i) {
        const SimulatedP2View sim = straw_simulate(y, FieldElement(5, kQ101), rng);
        ++y0_counts[sim.y0[0].value()];
        ++x1_counts[sim.x1[0].value()];
        ++s0_counts[sim.s0.value()];
    }
    REQUIRE(testsupport::chi_square_uniform(y0_counts) < testsupport::kChiSq999Df100);
    REQUIRE(testsupport::chi_square_uniform(x1_counts) < testsupport::kChiSq999Df100);
    REQUIRE(testsupport::chi_square_uniform(s0_counts) < testsupport::kChiSq999Df100);
}

TEST_CASE("the distinguisher accepts every real view", "[attack]")
{
    Rng rng(808);
    for (int i = 0; i < 300; ++i) {
        const FieldVector x = sample_vector(rng, kQ101, 2);
        const FieldVector y = sample_vector(rng, kQ101, 2);
        const SessionRecord record = run_session_recorded(x, y, 2, kQ101, rng);
        REQUIRE(distinguish(*record.p2_view, x));
    }
}

TEST_CASE("the distinguisher accepts simulated views at rate about 1/q", "[attack][stats]")
{
    Rng rng(909);
    const std::uint64_t trials = 20000;
    std::uint64_t accepts = 0;
    const FieldVector x = FieldVector::of(kQ101, {33, 44});
    for (std::uint64_t t = 0; t < trials; ++t) {
        const FieldVector y = sample_vector(rng, kQ101, 2);
        const SimulatedP2View sim = straw_simulate(y, rng.sample(kQ101), rng);
        if (distinguish(sim, x)) ++accepts;
    }
    const double rate = static_cast<double>(accepts) / static_cast<double>(trials);
    REQUIRE(testsupport::within_3_sigma(rate, 1.0 / 101.0, trials));
}

TEST_CASE("the experiment reports the expected advantage", "[attack][stats]")
{
    const AdvantageReport report = run_distinguisher_experiment(kQ101, 4, 20000, 31415);
    REQUIRE(report.real_accept_rate == 1.0);
    REQUIRE(testsupport::within_3_sigma(report.ideal_accept_rate, 1.0 / 101.0, report.trials));
    REQUIRE(report.advantage == report.real_accept_rate - report.ideal_accept_rate);
    REQUIRE(report.q == 101);
    REQUIRE(report.k == 4);
    REQUIRE(report.seed == 31415);
}

TEST_CASE("the experiment is deterministic and thread-count independent", "[attack]")
{
    const AdvantageReport a = run_distinguisher_experiment(kQ101, 2, 5000, 42, 1);
    const AdvantageReport b = run_distinguisher_experiment(kQ101, 2, 5000, 42, 1);
    const AdvantageReport c = run_distinguisher_experiment(kQ101, 2, 5000, 42, 4);
    REQUIRE(a.real_accept_rate == b.real_accept_rate);
    REQUIRE(a.ideal_accept_rate == b.ideal_accept_rate);
    REQUIRE(a.real_accept_rate == c.real_accept_rate);
    REQUIRE(a.ideal_accept_rate == c.ideal_accept_rate);
    REQUIRE(a.advantage == c.advantage);
}

TEST_CASE("the experiment validates its arguments", "[attack]")
{
    REQUIRE_THROWS_AS(run_distinguisher_experiment(kQ101, 0, 10, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(run_distinguisher_experiment(kQ101, 1, 0, 1), std::invalid_argument);
}
