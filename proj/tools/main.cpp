#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "heun/hypergeometric.hpp"

namespace {

constexpr const char* kComplexGrammar =
    "Complex literals: 're' or 're+imi' / 're-imi' (examples: 1.5, 2+3i, "
    "-1-0.5i, 0.25i).";

void add_equation_flags(CLI::App* cmd, heunsol::EquationFlags* eq) {
  cmd->add_option("--gamma", eq->gamma, "gamma parameter")->required();
  cmd->add_option("--delta", eq->delta, "delta parameter")->required();
  cmd->add_option("--epsilon", eq->epsilon, "epsilon parameter")->required();
  cmd->add_option("--alpha", eq->alpha, "alpha parameter")->required();
  cmd->add_option("--int-tol", eq->int_tol,
                  "absolute tolerance for integer exponent detection")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "heunsol: closed-form generalized hypergeometric solutions of the "
      "confluent Heun equation, with independent verification.\n" +
      std::string(kComplexGrammar)};
  app.require_subcommand(1);

  heunsol::EquationFlags spectrum_eq;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum",
      "Compute the accessory-parameter spectrum and auxiliary parameters");
  add_equation_flags(spectrum, &spectrum_eq);

  heunsol::EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate a solution on a grid and report equation residuals");
  eval->add_option("--descriptor", eval_opt.descriptor_path,
                   "solution descriptor JSON file (from `spectrum`)");
  add_equation_flags(eval, &eval_opt.eq);
  for (const std::string flag : {"--gamma", "--delta", "--epsilon", "--alpha"})
    eval->get_option(flag)->required(false);
  eval->add_option("--q", eval_opt.q,
                   "accessory value (inline mode; validated against the "
                   "spectrum)");
  eval->add_option("--root-index", eval_opt.root_index,
                   "pick the k-th spectrum root instead of --q");
  eval->add_option("--from", eval_opt.from, "grid start (complex)")
      ->capture_default_str();
  eval->add_option("--to", eval_opt.to, "grid stop (complex)")
      ->capture_default_str();
  eval->add_option("--count", eval_opt.count, "grid point count")
      ->capture_default_str();

  heunsol::VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Run the full verification report (coefficient oracle, residuals, "
      "consistency relations, closed-form comparison)");
  add_equation_flags(verify, &verify_opt.eq);
  verify->add_option("--q-override", verify_opt.q_override,
                     "check residuals against this accessory value instead "
                     "of the spectrum root (negative-control hook)");

  heunsol::DemoOptions demo_opt;
  CLI::App* demo = app.add_subcommand(
      "demo",
      "Two-state dynamics under the Lambert-W level-crossing drive; emits a "
      "CSV trajectory with conservation and residual diagnostics");
  demo->add_option("--u0", demo_opt.u0, "Rabi frequency")->capture_default_str();
  demo->add_option("--delta0", demo_opt.delta0, "detuning-rate parameter")
      ->capture_default_str();
  demo->add_option("--delta1", demo_opt.delta1, "detuning-rate parameter")
      ->capture_default_str();
  demo->add_option("--tau", demo_opt.tau, "time scale")->capture_default_str();
  demo->add_option("--sign1", demo_opt.sign1, "root sign in alpha1 (+1/-1)")
      ->capture_default_str();
  demo->add_option("--sign0", demo_opt.sign0, "root sign in alpha0 (+1/-1)")
      ->capture_default_str();
  demo->add_option("--t-start", demo_opt.t_start, "grid start")
      ->capture_default_str();
  demo->add_option("--t-stop", demo_opt.t_stop, "grid stop")
      ->capture_default_str();
  demo->add_option("--t-count", demo_opt.t_count, "grid point count")
      ->capture_default_str();
  demo->add_flag("--fundamental", demo_opt.fundamental,
                 "emit the single constructed solution for the given signs "
                 "instead of matching initial conditions");
  demo->add_option("--ic-a1", demo_opt.ic_a1, "state-1 amplitude at --ic-time")
      ->capture_default_str();
  demo->add_option("--ic-a2", demo_opt.ic_a2, "state-2 amplitude at --ic-time")
      ->capture_default_str();
  demo->add_option("--ic-time", demo_opt.ic_time,
                   "anchor time for the initial conditions")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return heunsol::kExitUsage;
  }

  try {
    if (spectrum->parsed())
      return heunsol::cmd_spectrum(spectrum_eq, std::cout, std::cerr);
    if (eval->parsed())
      return heunsol::cmd_eval(eval_opt, std::cout, std::cerr);
    if (verify->parsed())
      return heunsol::cmd_verify(verify_opt, std::cout, std::cerr);
    if (demo->parsed())
      return heunsol::cmd_demo(demo_opt, std::cout, std::cerr);
  } catch (const heun::UnsupportedCaseError& e) {
    std::cerr << "heunsol: " << e.what() << "\n";
    return heunsol::kExitUnsupported;
  } catch (const std::invalid_argument& e) {
    std::cerr << "heunsol: " << e.what() << "\n";
    return heunsol::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "heunsol: " << e.what() << "\n";
    return heunsol::kExitVerificationFailure;
  }
  return heunsol::kExitUsage;
}
