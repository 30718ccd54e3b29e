#ifndef HEUNSOL_TOOLS_COMMANDS_HPP
#define HEUNSOL_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>

namespace heunsol {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnsupported = 3;

struct EquationFlags {
  std::string gamma;
  std::string delta;
  std::string epsilon;
  std::string alpha;
  double int_tol = 1e-9;
};

int cmd_spectrum(const EquationFlags& eq, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::string descriptor_path;  // when set, inline equation flags are ignored
  EquationFlags eq;
  std::string q;        // inline mode: accessory value (validated)
  int root_index = -1;  // inline mode alternative: pick the k-th root
  std::string from = "0.1";
  std::string to = "0.9";
  int count = 41;
};

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  EquationFlags eq;
  std::string q_override;  // residual checks run against this accessory value
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

struct DemoOptions {
  double u0 = 1.0;
  double delta0 = 2.0;
  double delta1 = 1.0;
  double tau = 1.0;
  int sign1 = +1;
  int sign0 = +1;
  double t_start = -10.0;
  double t_stop = 10.0;
  int t_count = 200;
  bool fundamental = false;  // emit the single constructed solution instead
                             // of the initial-condition-matched combination
  std::string ic_a1 = "1";
  std::string ic_a2 = "0";
  double ic_time = 0.0;
};

int cmd_demo(const DemoOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace heunsol

#endif  // HEUNSOL_TOOLS_COMMANDS_HPP
