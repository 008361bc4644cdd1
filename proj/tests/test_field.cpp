#include <catch2/catch_amalgamated.hpp>

#include <diplab/field.hpp>

#include "support/stats.hpp"

using namespace diplab;

namespace {
const Modulus kQ7(7);
const Modulus kQ101(101);
} // namespace

TEST_CASE("Modulus accepts primes in range and rejects everything else", "[field]")
{
    REQUIRE(Modulus(2).value() == 2);
    REQUIRE(Modulus(7).value() == 7);
    REQUIRE(Modulus(2147483647).value() == 2147483647u); // largest prime < 2^31

    REQUIRE_THROWS_AS(Modulus(0), std::invalid_argument);
    REQUIRE_THROWS_AS(Modulus(1), std::invalid_argument);
    REQUIRE_THROWS_AS(Modulus(6), std::invalid_argument);
    REQUIRE_THROWS_AS(Modulus(561), std::invalid_argument);  // Carmichael number
    REQUIRE_THROWS_AS(Modulus(2147483645), std::invalid_argument);
    REQUIRE_THROWS_AS(Modulus(1ull << 31), std::invalid_argument);
    REQUIRE_THROWS_AS(Modulus(4294967291ull), std::invalid_argument); // prime, but >= 2^31
}

TEST_CASE("reduce maps any signed integer into canonical form", "[field]")
{
    REQUIRE(FieldElement::reduce(15, kQ7).value() == 1);
    REQUIRE(FieldElement::reduce(0, kQ7).value() == 0);
    REQUIRE(FieldElement::reduce(-1, kQ7).value() == 6);
    REQUIRE(FieldElement::reduce(-7, kQ7).value() == 0);
    REQUIRE(FieldElement::reduce(std::numeric_limits<std::int64_t>::min(), kQ7).value() < 7);
}

TEST_CASE("canonical constructor rejects out-of-range values", "[field]")
{
    REQUIRE_THROWS_AS(FieldElement(7, kQ7), std::invalid_argument);
    REQUIRE(FieldElement(6, kQ7).value() == 6);
}

TEST_CASE("arithmetic over F_7 matches hand-computed values", "[field]")
{
    const auto fe = [](std::uint32_t v) { return FieldElement(v, kQ7); };
    REQUIRE((fe(3) + fe(5)).value() == 1);
    REQUIRE((fe(3) * fe(5)).value() == 1);
    REQUIRE((-fe(0)).value() == 0);
    REQUIRE((fe(2) - fe(5)).value() == 4);
}

TEST_CASE("inversion over F_7", "[field]")
{
    const auto fe = [](std::uint32_t v) { return FieldElement(v, kQ7); };
    REQUIRE(fe(1).inv() == fe(1));
    REQUIRE(fe(3).inv() == fe(5));
    REQUIRE(fe(4).inv() == fe(2));
    REQUIRE_THROWS_AS(fe(0).inv(), InversionOfZero);
}

TEST_CASE("mixed-modulus operations are rejected", "[field]")
{
    const FieldElement a(3, kQ7);
    const FieldElement b(3, kQ101);
    REQUIRE_THROWS_AS(a + b, std::invalid_argument);
    REQUIRE_THROWS_AS(a - b, std::invalid_argument);
    REQUIRE_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("field axioms hold exhaustively for small q", "[field]")
{
    for (std::uint64_t qv : {2ull, 3ull, 5ull}) {
        const Modulus q(qv);
        for (std::uint32_t av = 0; av < qv; ++av) {
            const FieldElement a(av, q);
            if (!a.is_zero()) REQUIRE(a * a.inv() == FieldElement::one(q));
            for (std::uint32_t bv = 0; bv < qv; ++bv) {
                const FieldElement b(bv, q);
                REQUIRE(a + b == b + a);
                REQUIRE(a * b == b * a);
                for (std::uint32_t cv = 0; cv < qv; ++cv) {
                    const FieldElement c(cv, q);
                    REQUIRE((a + b) + c == a + (b + c));
                    REQUIRE((a * b) * c == a * (b * c));
                    REQUIRE(a * (b + c) == a * b + a * c);
                }
            }
        }
    }
}

TEST_CASE("field axioms hold on random triples at a large modulus", "[field]")
{
    const Modulus q(2147483647);
    Rng rng(20240817);
    for (int i = 0; i < 2000; ++i) {
        const FieldElement a = rng.sample(q), b = rng.sample(q), c = rng.sample(q);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a - b == -(b - a));
        if (!a.is_zero()) REQUIRE(a * a.inv() == FieldElement::one(q));
    }
}

TEST_CASE("arithmetic results are already canonical", "[field]")
{
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const FieldElement a = rng.sample(kQ101), b = rng.sample(kQ101);
        const FieldElement s = a + b;
        REQUIRE(s.value() < 101);
        REQUIRE(FieldElement::reduce(s.value(), kQ101) == s);
    }
}

TEST_CASE("sampling is deterministic per seed", "[field][rng]")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.sample(kQ101) == b.sample(kQ101));

    Rng c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i)
        if (!(c.sample(kQ101) == d.sample(kQ101))) all_equal = false;
    REQUIRE_FALSE(all_equal);
}

TEST_CASE("samples stay in range", "[field][rng]")
{
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) REQUIRE(rng.sample(kQ7).value() < 7);
}

TEST_CASE("F_2 sample mean sits in the binomial band", "[field][rng]")
{
    const Modulus q2(2);
    Rng rng(5150);
    std::uint64_t ones = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ones += rng.sample(q2).value();
    const double mean = static_cast<double>(ones) / n;
    REQUIRE(mean >= 0.47);
    REQUIRE(mean <= 0.53);
}

TEST_CASE("chi-square uniformity of sampling over F_101", "[field][rng][stats]")
{
    Rng rng(314159);
    std::vector<std::uint64_t> counts(101, 0);
    for (int i = 0; i < 100000; ++i) ++counts[rng.sample(kQ101).value()];
    REQUIRE(testsupport::chi_square_uniform(counts) < testsupport::kChiSq999Df100);
}

TEST_CASE("mix_seed derives distinct deterministic streams", "[field][rng]")
{
    REQUIRE(mix_seed(1, 0) == mix_seed(1, 0));
    REQUIRE(mix_seed(1, 0) != mix_seed(1, 1));
    REQUIRE(mix_seed(1, 0) != mix_seed(2, 0));
    // Derived streams should not collide for a batch of trial indices.
    std::vector<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 1000; ++t) seen.push_back(mix_seed(99, t));
    std::sort(seen.begin(), seen.end());
    REQUIRE(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}
