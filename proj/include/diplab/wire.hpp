#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "protocol.hpp"

// Byte framing for the four protocol messages:
//
//   tag (1 byte) || k (4-byte little-endian) || values (8-byte little-endian each)
//
// where k is the vector length and the value count is k, plus one trailing
// scalar for SetupP2 (s0) and Msg2 (r1). Values are never reduced on decode:
// out-of-range entries come back as raw integers so the receiver's
// membership check is what rejects them. Only malformed framing (bad tag,
// truncated or overlong buffer) is a decode error.
namespace diplab::wire {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint8_t kTagSetupP1 = 0x01;
inline constexpr std::uint8_t kTagSetupP2 = 0x02;
inline constexpr std::uint8_t kTagMsg1 = 0x03;
inline constexpr std::uint8_t kTagMsg2 = 0x04;

// Setup messages as they cross the wire, before validation.
struct RawSetupP1 {
    RawVec x0;
    friend bool operator==(const RawSetupP1&, const RawSetupP1&) = default;
};

struct RawSetupP2 {
    RawVec y0;
    RawValue s0;
    friend bool operator==(const RawSetupP2&, const RawSetupP2&) = default;
};

using Decoded = std::variant<RawSetupP1, RawSetupP2, Msg1, Msg2>;

namespace detail {

inline void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32le(std::span<const std::uint8_t> in)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64le(std::span<const std::uint8_t> in)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return v;
}

inline std::vector<std::uint8_t> encode_frame(std::uint8_t tag, const RawVec& vec,
                                              std::optional<RawValue> trailing)
{
    std::vector<std::uint8_t> out;
    out.reserve(5 + 8 * (vec.size() + (trailing ? 1 : 0)));
    out.push_back(tag);
    put_u32le(out, static_cast<std::uint32_t>(vec.size()));
    for (RawValue v : vec) put_u64le(out, v);
    if (trailing) put_u64le(out, *trailing);
    return out;
}

} // namespace detail

inline std::vector<std::uint8_t> encode(const RawSetupP1& m) { return detail::encode_frame(kTagSetupP1, m.x0, std::nullopt); }
inline std::vector<std::uint8_t> encode(const RawSetupP2& m) { return detail::encode_frame(kTagSetupP2, m.y0, m.s0); }
inline std::vector<std::uint8_t> encode(const Msg1& m) { return detail::encode_frame(kTagMsg1, m.y1, std::nullopt); }
inline std::vector<std::uint8_t> encode(const Msg2& m) { return detail::encode_frame(kTagMsg2, m.x1, m.r1); }

inline std::vector<std::uint8_t> encode(const SetupP1& m) { return encode(RawSetupP1{m.x0.raw_values()}); }
inline std::vector<std::uint8_t> encode(const SetupP2& m) { return encode(RawSetupP2{m.y0.raw_values(), m.s0.value()}); }

inline Decoded decode(std::span<const std::uint8_t> buf)
{
    if (buf.size() < 5) throw DecodeError("decode: buffer shorter than header");
    const std::uint8_t tag = buf[0];
    if (tag < kTagSetupP1 || tag > kTagMsg2) throw DecodeError("decode: unknown tag");
    const std::uint64_t k = detail::get_u32le(buf.subspan(1));
    const bool has_trailing = (tag == kTagSetupP2 || tag == kTagMsg2);
    const std::uint64_t value_count = k + (has_trailing ? 1 : 0);
    if (buf.size() != 5 + 8 * value_count) throw DecodeError("decode: buffer length does not match header");

    RawVec values;
    values.reserve(static_cast<std::size_t>(k));
    for (std::uint64_t i = 0; i < k; ++i) values.push_back(detail::get_u64le(buf.subspan(5 + 8 * i)));
    const RawValue trailing = has_trailing ? detail::get_u64le(buf.subspan(5 + 8 * k)) : 0;

    switch (tag) {
    case kTagSetupP1: return RawSetupP1{std::move(values)};
    case kTagSetupP2: return RawSetupP2{std::move(values), trailing};
    case kTagMsg1: return Msg1{std::move(values)};
    default: return Msg2{std::move(values), trailing};
    }
}

// Validation of decoded setup messages into the typed session setups. The
// initializer is honest in the model; these exist so a transport (or a
// robustness test) can still reject a corrupted delivery.
inline std::optional<SetupP1> validate_setup1(const RawSetupP1& raw, std::size_t k, Modulus q)
{
    auto x0 = to_field_vector(raw.x0, k, q);
    if (!x0) return std::nullopt;
    return SetupP1{std::move(*x0)};
}

inline std::optional<SetupP2> validate_setup2(const RawSetupP2& raw, std::size_t k, Modulus q)
{
    auto y0 = to_field_vector(raw.y0, k, q);
    if (!y0 || !is_field_value(raw.s0, q)) return std::nullopt;
    return SetupP2{std::move(*y0), FieldElement(static_cast<std::uint32_t>(raw.s0), q)};
}

} // namespace diplab::wire
