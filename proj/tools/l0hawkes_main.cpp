// Command-line front end: simulate, fit, diagnose, eval, cap, aic-scan.
#include <iostream>

#include "CLI11.hpp"
#include "l0hawkes/commands.hpp"

namespace {

using namespace l0hawkes::cli;

void add_fit_flags(CLI::App* cmd, FitFlags& f, bool with_tau) {
  if (with_tau) {
    auto* tau = cmd->add_option("--tau", f.tau, "Regularization strength");
    auto* gamma = cmd->add_option("--gamma", f.gamma, "Sparsity prior, tau = ln(gamma/(1-gamma))");
    tau->excludes(gamma);
    gamma->excludes(tau);
  }
  cmd->add_option("--epsilon", f.epsilon, "Activity threshold for impact entries")->capture_default_str();
  cmd->add_option("--nu-a", f.nu_a, "Ridge penalty on impact")->capture_default_str();
  cmd->add_option("--nu-mu", f.nu_mu, "Ridge penalty on baseline")->capture_default_str();
  cmd->add_option("--nu-beta", f.nu_beta, "Ridge penalty on decay")->capture_default_str();
  cmd->add_option("--decay", f.decay, "Kernel family")->check(CLI::IsMember({"exp", "power"}))->capture_default_str();
  cmd->add_option("--eta", f.eta, "Power-law exponent (> 1)")->capture_default_str();
  cmd->add_option("--regularizer", f.regularizer, "Impact regularizer")
      ->check(CLI::IsMember({"l0", "l1", "l21"}))
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", f.tol, "Relative objective tolerance")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Recorded seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Hawkes process learning with cardinality regularization"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate an event sequence");
  auto* sim_config = c_sim->add_option("--config", sim.config, "Simulation config JSON");
  auto* sim_preset = c_sim->add_option("--preset", sim.preset, "Built-in config")->check(CLI::IsMember({"sparse5", "dense10"}));
  sim_config->excludes(sim_preset);
  c_sim->add_option("--out,-o", sim.out, "Event CSV to write")->required();
  c_sim->add_option("--seed", sim.seed, "Override the config seed");

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "Fit a model to an event CSV");
  c_fit->add_option("events", fit.events, "Event CSV")->required();
  c_fit->add_option("--mapping", fit.mapping, "Type mapping CSV");
  add_fit_flags(c_fit, fit.flags, true);
  c_fit->add_option("--out,-o", fit.out_model, "Model JSON to write")->required();
  c_fit->add_option("--out-q", fit.out_q, "Triggering matrix CSV to write");

  DiagnoseOptions diag;
  auto* c_diag = app.add_subcommand("diagnose", "Triggering probabilities of one event");
  c_diag->add_option("events", diag.events, "Event CSV")->required();
  c_diag->add_option("model", diag.model, "Model JSON")->required();
  c_diag->add_option("--index", diag.index, "1-based event index")->required();
  c_diag->add_option("--min-prob", diag.min_prob, "Omit candidates below this probability")->capture_default_str();
  c_diag->add_option("--out,-o", diag.out, "Write JSON here instead of stdout");

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Compare a model with a ground-truth graph");
  c_eval->add_option("model", eval.model, "Model JSON")->required();
  c_eval->add_option("truth", eval.truth, "Truth CSV")->required();
  c_eval->add_option("--epsilon", eval.epsilon, "Override the model threshold");
  c_eval->add_flag("--include-diagonal", eval.include_diagonal, "Score self-excitation entries too");

  CapOptions cap;
  auto* c_cap = app.add_subcommand("cap", "Sweep tau and build the accuracy curve");
  auto* cap_preset = c_cap->add_option("--preset", cap.preset, "Built-in benchmark")->check(CLI::IsMember({"sparse5", "dense10"}));
  auto* cap_dir = c_cap->add_option("--events-dir", cap.events_dir, "Directory of event CSVs with sidecars");
  cap_preset->excludes(cap_dir);
  c_cap->add_option("--taus", cap.taus, "Tau values")->required()->delimiter(',');
  c_cap->add_option("--seeds", cap.seeds, "Preset seeds")->delimiter(',');
  add_fit_flags(c_cap, cap.flags, false);
  c_cap->add_flag("--frozen-stats", cap.frozen_stats, "Fit once at tau=0 and re-solve A per tau");
  c_cap->add_flag("--include-diagonal", cap.include_diagonal, "Score self-excitation entries too");
  c_cap->add_option("--out,-o", cap.out_csv, "Curve CSV to write")->required();
  c_cap->add_option("--out-break-even", cap.out_break_even, "Break-even JSON (default: <out>.breakeven.json)");
  c_cap->add_option("--jobs,-j", cap.jobs, "Worker threads (0: all cores)");

  AicScanOptions scan;
  auto* c_scan = app.add_subcommand("aic-scan", "Grid search over hyperparameters by AIC");
  c_scan->add_option("events", scan.events, "Event CSV")->required();
  c_scan->add_option("--mapping", scan.mapping, "Type mapping CSV");
  c_scan->add_option("--taus", scan.taus, "Tau grid")->delimiter(',');
  c_scan->add_option("--epsilons", scan.epsilons, "Epsilon grid")->delimiter(',');
  c_scan->add_option("--nu-as", scan.nu_as, "nu_A grid")->delimiter(',');
  c_scan->add_option("--nu-mus", scan.nu_mus, "nu_mu grid")->delimiter(',');
  c_scan->add_option("--nu-betas", scan.nu_betas, "nu_beta grid")->delimiter(',');
  add_fit_flags(c_scan, scan.flags, false);
  c_scan->add_option("--out,-o", scan.out_csv, "Result CSV to write")->required();
  c_scan->add_option("--jobs,-j", scan.jobs, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*c_sim) return run_simulate(sim, std::cout, std::cerr);
  if (*c_fit) return run_fit(fit, std::cout, std::cerr);
  if (*c_diag) return run_diagnose(diag, std::cout, std::cerr);
  if (*c_eval) return run_eval(eval, std::cout, std::cerr);
  if (*c_cap) return run_cap(cap, std::cout, std::cerr);
  if (*c_scan) return run_aic_scan(scan, std::cout, std::cerr);
  return kExitInput;
}
