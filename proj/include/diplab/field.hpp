#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Exact arithmetic in the prime field F_q, q < 2^31, plus deterministic
// uniform sampling. Products of two canonical residues fit in 64 bits,
// so every operation reduces a single 64-bit intermediate.
namespace diplab {

// Raw protocol payload: integers as they arrive off the wire, before any
// field-membership check. May hold values >= q.
using RawValue = std::uint64_t;
using RawVec = std::vector<RawValue>;

namespace detail {

inline constexpr std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline constexpr std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

// Miller-Rabin with witness set {2, 3, 5, 7}: deterministic for all
// n < 3'215'031'751, which covers the whole [2, 2^31) modulus range.
inline constexpr bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace detail

// A validated prime modulus q with 2 <= q < 2^31.
class Modulus {
public:
    explicit Modulus(std::uint64_t q)
    {
        if (q < 2 || q >= (1ull << 31))
            throw std::invalid_argument("Modulus: q must satisfy 2 <= q < 2^31, got " + std::to_string(q));
        if (!detail::is_prime_u64(q))
            throw std::invalid_argument("Modulus: q must be prime, got " + std::to_string(q));
        q_ = static_cast<std::uint32_t>(q);
    }

    std::uint32_t value() const { return q_; }

    friend bool operator==(Modulus, Modulus) = default;

private:
    std::uint32_t q_;
};

// Raised when inverting the zero element.
class InversionOfZero : public std::domain_error {
public:
    InversionOfZero() : std::domain_error("field inversion of zero") {}
};

// A canonical residue in [0, q). Carries its modulus; operations on
// elements of different fields are rejected.
class FieldElement {
public:
    FieldElement(std::uint32_t value, Modulus m) : value_(value), mod_(m)
    {
        if (value >= m.value())
            throw std::invalid_argument("FieldElement: value " + std::to_string(value) + " not canonical mod " +
                                        std::to_string(m.value()));
    }

    // Total reduction of any signed 64-bit integer into [0, q).
    static FieldElement reduce(std::int64_t v, Modulus m)
    {
        const auto q = static_cast<std::int64_t>(m.value());
        std::int64_t r = v % q;
        if (r < 0) r += q;
        return FieldElement(static_cast<std::uint32_t>(r), m);
    }

    static FieldElement zero(Modulus m) { return FieldElement(0, m); }
    static FieldElement one(Modulus m) { return FieldElement(1 % m.value(), m); }

    std::uint32_t value() const { return value_; }
    Modulus modulus() const { return mod_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(FieldElement rhs) const
    {
        check_same_field(rhs);
        std::uint64_t s = static_cast<std::uint64_t>(value_) + rhs.value_;
        if (s >= mod_.value()) s -= mod_.value();
        return FieldElement(static_cast<std::uint32_t>(s), mod_);
    }

    FieldElement operator-(FieldElement rhs) const
    {
        check_same_field(rhs);
        return *this + (-rhs);
    }

    FieldElement operator-() const
    {
        return FieldElement(value_ == 0 ? 0 : mod_.value() - value_, mod_);
    }

    FieldElement operator*(FieldElement rhs) const
    {
        check_same_field(rhs);
        std::uint64_t p = static_cast<std::uint64_t>(value_) * rhs.value_;
        return FieldElement(static_cast<std::uint32_t>(p % mod_.value()), mod_);
    }

    FieldElement& operator+=(FieldElement rhs) { return *this = *this + rhs; }
    FieldElement& operator-=(FieldElement rhs) { return *this = *this - rhs; }
    FieldElement& operator*=(FieldElement rhs) { return *this = *this * rhs; }

    // Multiplicative inverse via extended Euclid; a*inv(a) = 1 for a != 0.
    FieldElement inv() const
    {
        if (value_ == 0) throw InversionOfZero();
        std::int64_t old_r = value_, r = mod_.value();
        std::int64_t old_s = 1, s = 0;
        while (r != 0) {
            const std::int64_t quotient = old_r / r;
            std::int64_t tmp = old_r;
            old_r = r;
            r = tmp - quotient * r;
            tmp = old_s;
            old_s = s;
            s = tmp - quotient * s;
        }
        return reduce(old_s, mod_);
    }

    friend bool operator==(FieldElement, FieldElement) = default;

private:
    void check_same_field(FieldElement rhs) const
    {
        if (!(mod_ == rhs.mod_))
            throw std::invalid_argument("FieldElement: mixed moduli " + std::to_string(mod_.value()) + " and " +
                                        std::to_string(rhs.mod_.value()));
    }

    std::uint32_t value_;
    Modulus mod_;
};

// A party output: either a field element or the abort symbol (nullopt).
// The abort symbol is not a field value, so it never collides with a share.
using PartyOutput = std::optional<FieldElement>;

inline bool is_field_value(RawValue v, Modulus m) { return v < m.value(); }

// SplitMix64 finalizer. Derives independent per-trial / per-session seeds
// from a base seed and a stream index.
inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ull + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic PRNG (mt19937_64, whose output stream is pinned by the
// standard). Field sampling uses mask-and-reject, so draws are uniform on
// [0, q) with no modulo bias.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    FieldElement sample(Modulus m)
    {
        const std::uint64_t q = m.value();
        const std::uint64_t mask = std::bit_ceil(q) - 1;
        std::uint64_t r;
        do {
            r = gen_() & mask;
        } while (r >= q);
        return FieldElement(static_cast<std::uint32_t>(r), m);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace diplab
