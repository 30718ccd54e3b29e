#include "descriptor.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace heunsol {

namespace {

json optional_residual(const std::optional<double>& r) {
  if (!r) return nullptr;
  return *r;
}

std::optional<double> optional_residual_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

heun::CaseKind case_kind_from_string(const std::string& s) {
  using heun::CaseKind;
  for (const CaseKind k :
       {CaseKind::Kummer, CaseKind::Bessel, CaseKind::GhfDelta,
        CaseKind::GhfDeltaEps0, CaseKind::NeedsDeltaShift, CaseKind::NeedsSwap,
        CaseKind::Exceptional, CaseKind::Unsupported}) {
    if (s == heun::to_string(k)) return k;
  }
  throw std::invalid_argument("unknown case kind: " + s);
}

}  // namespace

json complex_to_json(heun::Complex z) { return json::array({z.real(), z.imag()}); }

heun::Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json params_to_json(const heun::CheParams& p) {
  json out;
  out["gamma"] = complex_to_json(p.gamma);
  out["delta"] = complex_to_json(p.delta);
  out["epsilon"] = complex_to_json(p.epsilon);
  out["alpha"] = complex_to_json(p.alpha);
  if (p.q) out["q"] = complex_to_json(*p.q);
  return out;
}

heun::CheParams params_from_json(const json& j) {
  heun::CheParams p;
  p.gamma = complex_from_json(j.at("gamma"));
  p.delta = complex_from_json(j.at("delta"));
  p.epsilon = complex_from_json(j.at("epsilon"));
  p.alpha = complex_from_json(j.at("alpha"));
  if (j.contains("q")) p.q = complex_from_json(j.at("q"));
  return p;
}

json case_to_json(const heun::CaseClass& c) {
  json out;
  out["kind"] = heun::to_string(c.kind);
  out["n"] = c.n_value;
  out["int_tol"] = c.int_tol;
  return out;
}

json ghf_to_json(const heun::GhfSolution& sol) {
  json out;
  json nums = json::array();
  for (const auto& a : sol.numerator_params) nums.push_back(complex_to_json(a));
  json dens = json::array();
  for (const auto& b : sol.denominator_params) dens.push_back(complex_to_json(b));
  out["numerators"] = std::move(nums);
  out["denominators"] = std::move(dens);
  out["scale"] = complex_to_json(sol.scale);
  out["base_point"] = sol.base_point;
  out["prefactor_exponent"] = complex_to_json(sol.prefactor_exponent);
  return out;
}

heun::GhfSolution ghf_from_json(const json& j) {
  heun::GhfSolution sol;
  for (const auto& a : j.at("numerators"))
    sol.numerator_params.push_back(complex_from_json(a));
  for (const auto& b : j.at("denominators"))
    sol.denominator_params.push_back(complex_from_json(b));
  sol.scale = complex_from_json(j.at("scale"));
  sol.base_point = j.at("base_point").get<double>();
  sol.prefactor_exponent = complex_from_json(j.at("prefactor_exponent"));
  return sol;
}

json descriptor_to_json(const SolutionDescriptor& d) {
  json out;
  out["format"] = kSolutionFormatTag;
  out["input"] = params_to_json(d.input);
  out["case"] = case_to_json(d.case_class);
  out["q"] = complex_to_json(d.solution.q);
  json e = json::array();
  for (const auto& ek : d.solution.e_params) e.push_back(complex_to_json(ek));
  out["e"] = std::move(e);
  out["ghf"] = ghf_to_json(d.solution.solution);
  out["canonical"] = params_to_json(d.solution.canonical);

  json flags;
  flags["valid"] = d.solution.flags.valid;
  flags["denominator_hazard"] = d.solution.flags.denominator_hazard;
  flags["degenerate_system"] = d.solution.flags.degenerate_system;
  flags["scale_coincidence"] = d.solution.flags.scale_coincidence;
  flags["sigma_residual"] = d.solution.flags.sigma_residual;
  flags["max_node_residual"] = d.solution.flags.max_node_residual;
  out["flags"] = std::move(flags);

  json rel;
  rel["product"] = optional_residual(d.solution.relations.product);
  rel["middle"] = optional_residual(d.solution.relations.middle);
  rel["sum"] = optional_residual(d.solution.relations.sum);
  out["relations"] = std::move(rel);

  out["multiplicity"] = d.solution.multiplicity;
  return out;
}

SolutionDescriptor descriptor_from_json(const json& j) {
  if (j.value("format", "") != kSolutionFormatTag)
    throw std::invalid_argument("not a solution descriptor document");
  SolutionDescriptor d;
  d.input = params_from_json(j.at("input"));
  d.case_class.kind = case_kind_from_string(j.at("case").at("kind"));
  d.case_class.n_value = j.at("case").at("n").get<int>();
  d.case_class.int_tol = j.at("case").at("int_tol").get<double>();
  d.solution.q = complex_from_json(j.at("q"));
  for (const auto& ek : j.at("e"))
    d.solution.e_params.push_back(complex_from_json(ek));
  d.solution.solution = ghf_from_json(j.at("ghf"));
  d.solution.canonical = params_from_json(j.at("canonical"));

  const json& flags = j.at("flags");
  d.solution.flags.valid = flags.at("valid").get<bool>();
  d.solution.flags.denominator_hazard =
      flags.at("denominator_hazard").get<bool>();
  d.solution.flags.degenerate_system =
      flags.at("degenerate_system").get<bool>();
  d.solution.flags.scale_coincidence =
      flags.at("scale_coincidence").get<bool>();
  d.solution.flags.sigma_residual = flags.at("sigma_residual").get<double>();
  d.solution.flags.max_node_residual =
      flags.at("max_node_residual").get<double>();

  const json& rel = j.at("relations");
  d.solution.relations.product = optional_residual_from(rel.at("product"));
  d.solution.relations.middle = optional_residual_from(rel.at("middle"));
  d.solution.relations.sum = optional_residual_from(rel.at("sum"));

  d.solution.multiplicity = j.at("multiplicity").get<int>();
  return d;
}

heun::Complex parse_complex(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty complex literal");

  std::string s;
  for (const char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty complex literal");

  const auto parse_real = [](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size())
      throw std::invalid_argument("malformed number: " + part);
    return v;
  };

  const bool imaginary_tail = s.back() == 'i' || s.back() == 'I';
  if (!imaginary_tail) return {parse_real(s), 0.0};

  s.pop_back();  // trailing i
  // Split at the last +/- that is not a leading sign or an exponent sign.
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    if (s[i] != '+' && s[i] != '-') continue;
    const char prev = s[i - 1];
    if (prev == 'e' || prev == 'E') continue;
    split = i;
    break;
  }
  if (split == std::string::npos) return {0.0, parse_real(s)};
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

std::string format_complex(heun::Complex z) {
  std::ostringstream out;
  out.precision(17);
  out << z.real();
  if (z.imag() != 0.0) {
    if (z.imag() >= 0.0 || std::isnan(z.imag())) out << "+";
    out << z.imag() << "i";
  }
  return out.str();
}

}  // namespace heunsol
