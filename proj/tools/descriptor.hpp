#ifndef HEUNSOL_TOOLS_DESCRIPTOR_HPP
#define HEUNSOL_TOOLS_DESCRIPTOR_HPP

#include <string>

#include <json.hpp>

#include "heun/hypergeometric.hpp"

namespace heunsol {

// Insertion-ordered JSON keeps the emitted documents stable and diffable.
using json = nlohmann::ordered_json;

inline constexpr const char* kSolutionFormatTag = "heunsol/solution-v1";
inline constexpr const char* kSpectrumFormatTag = "heunsol/spectrum-v1";
inline constexpr const char* kVerifyFormatTag = "heunsol/verify-v1";

// Complex values serialize as [re, im]; doubles round-trip exactly through
// the shortest-decimal encoder.
json complex_to_json(heun::Complex z);
heun::Complex complex_from_json(const json& j);

json params_to_json(const heun::CheParams& p);
heun::CheParams params_from_json(const json& j);

json case_to_json(const heun::CaseClass& c);

json ghf_to_json(const heun::GhfSolution& sol);
heun::GhfSolution ghf_from_json(const json& j);

/// One solution of one equation, self-describing: everything needed to
/// re-evaluate and re-verify it.
struct SolutionDescriptor {
  heun::CheParams input;  // original equation, q unset
  heun::CaseClass case_class;
  heun::ConstructedSolution solution;
};

json descriptor_to_json(const SolutionDescriptor& d);
SolutionDescriptor descriptor_from_json(const json& j);

/// Flag syntax for complex scalars: `re` or `re+imi` / `re-imi`
/// (e.g. "1.5", "2+3i", "-1-0.5i", "0.25i"). Throws std::invalid_argument
/// on malformed input.
heun::Complex parse_complex(const std::string& text);
std::string format_complex(heun::Complex z);

}  // namespace heunsol

#endif  // HEUNSOL_TOOLS_DESCRIPTOR_HPP
