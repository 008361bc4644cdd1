#pragma once

#include <string>

#include <json.hpp>

#include "attack.hpp"
#include "composed.hpp"
#include "linalg.hpp"
#include "protocol.hpp"

// JSON shapes for transcripts, recovery results, and experiment reports.
// Field elements and raw wire values are decimal strings (raw values may
// exceed the integer range JSON consumers handle exactly); the abort symbol
// is the string "lambda".
namespace diplab {

inline nlohmann::json raw_vec_json(const RawVec& v)
{
    nlohmann::json arr = nlohmann::json::array();
    for (RawValue x : v) arr.push_back(std::to_string(x));
    return arr;
}

inline void to_json(nlohmann::json& j, const FieldElement& e) { j = std::to_string(e.value()); }

inline void to_json(nlohmann::json& j, const FieldVector& v)
{
    j = nlohmann::json::array();
    for (const auto& e : v) j.push_back(std::to_string(e.value()));
}

inline void to_json(nlohmann::json& j, const FieldMatrix& m)
{
    j = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) j.push_back(m.row(r));
}

inline nlohmann::json outcome_json(const PartyOutput& out)
{
    if (!out) return "lambda";
    return *out;
}

inline void to_json(nlohmann::json& j, const SetupP1& s) { j = nlohmann::json{{"x0", s.x0}}; }
inline void to_json(nlohmann::json& j, const SetupP2& s) { j = nlohmann::json{{"y0", s.y0}, {"s0", s.s0}}; }
inline void to_json(nlohmann::json& j, const Msg1& m) { j = nlohmann::json{{"y1", raw_vec_json(m.y1)}}; }
inline void to_json(nlohmann::json& j, const Msg2& m)
{
    j = nlohmann::json{{"x1", raw_vec_json(m.x1)}, {"r1", std::to_string(m.r1)}};
}

inline void to_json(nlohmann::json& j, const Transcript& t)
{
    j = nlohmann::json{
        {"q", t.q.value()},
        {"k", t.k},
        {"setup1", t.setup1},
        {"setup2", t.setup2},
        {"msg1", t.msg1},
        {"msg2", t.msg2 ? nlohmann::json(*t.msg2) : nlohmann::json(nullptr)},
        {"outcome1", outcome_json(t.outcome1)},
        {"outcome2", outcome_json(t.outcome2)},
    };
}

inline void to_json(nlohmann::json& j, const SolutionSet& s)
{
    const char* kind = s.kind == SolutionSet::Kind::Unique      ? "unique"
                       : s.kind == SolutionSet::Kind::Affine    ? "affine"
                                                                : "inconsistent";
    j = nlohmann::json{
        {"kind", kind},
        {"particular", s.particular ? nlohmann::json(*s.particular) : nlohmann::json(nullptr)},
        {"nullspace_basis", s.nullspace_basis},
        {"rank", s.rank},
    };
}

inline void to_json(nlohmann::json& j, const LinearSystem& s)
{
    j = nlohmann::json{{"Y0", s.Y0}, {"q0", s.q0}};
}

inline void to_json(nlohmann::json& j, const RecoveryResult& r)
{
    const char* kind = r.kind == RecoveryResult::Kind::Unique    ? "unique"
                       : r.kind == RecoveryResult::Kind::Partial ? "partial"
                                                                 : "none";
    j = nlohmann::json{
        {"kind", kind},
        {"recovered", r.recovered ? nlohmann::json(*r.recovered) : nlohmann::json(nullptr)},
        {"solution_set", r.solution_set ? nlohmann::json(*r.solution_set) : nlohmann::json(nullptr)},
        {"system", r.system},
    };
}

inline void to_json(nlohmann::json& j, const AdvantageReport& r)
{
    j = nlohmann::json{
        {"trials", r.trials},
        {"real_accept_rate", r.real_accept_rate},
        {"ideal_accept_rate", r.ideal_accept_rate},
        {"advantage", r.advantage},
        {"q", r.q},
        {"k", r.k},
        {"seed", std::to_string(r.seed)},
    };
}

} // namespace diplab
