#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l0hawkes/kernel.hpp"
#include "l0hawkes/model.hpp"

namespace l0hawkes::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Flags shared by every command that fits a model.
struct FitFlags {
  std::optional<double> tau;
  std::optional<double> gamma;
  double epsilon = 0.01;
  double nu_a = 0.1;
  double nu_mu = 0.1;
  double nu_beta = 0.1;
  std::string decay = "exp";
  double eta = 2.0;
  std::string regularizer = "l0";
  int max_iter = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;

  /// tau from --tau or --gamma (exactly one, unless `tau_optional`).
  Hyperparams hyperparams(bool tau_optional = false) const;
  KernelFamily kernel() const;
};

struct SimulateOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

struct FitOptions {
  std::filesystem::path events;
  std::optional<std::filesystem::path> mapping;
  FitFlags flags;
  std::filesystem::path out_model;
  std::optional<std::filesystem::path> out_q;
};

struct DiagnoseOptions {
  std::filesystem::path events;
  std::filesystem::path model;
  std::size_t index = 1;
  double min_prob = 0.01;
  std::optional<std::filesystem::path> out;
};

struct EvalOptions {
  std::filesystem::path model;
  std::filesystem::path truth;
  std::optional<double> epsilon;
  bool include_diagonal = false;
};

struct CapOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> events_dir;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<double> taus;
  FitFlags flags;
  bool frozen_stats = false;
  bool include_diagonal = false;
  std::filesystem::path out_csv;
  std::optional<std::filesystem::path> out_break_even;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct AicScanOptions {
  std::filesystem::path events;
  std::optional<std::filesystem::path> mapping;
  std::vector<double> taus;
  std::vector<double> epsilons;
  std::vector<double> nu_as;
  std::vector<double> nu_mus;
  std::vector<double> nu_betas;
  FitFlags flags;  // tau/epsilon/nu values here fill any empty grid axis
  std::filesystem::path out_csv;
  unsigned jobs = 0;
};

/// One finished aic-scan cell, as seen by the selection rule.
struct AicCandidate {
  double aic;
  std::size_t cardinality;
  double tau;
};

/// Index of the lowest finite AIC; ties go to the smaller cardinality, then
/// the smaller tau, then the earlier cell.
std::optional<std::size_t> best_aic_cell(const std::vector<AicCandidate>& cells);

/// Sidecar paths written next to an event CSV by `simulate`.
std::filesystem::path truth_sidecar(const std::filesystem::path& events);
std::filesystem::path types_sidecar(const std::filesystem::path& events);

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int run_fit(const FitOptions& opts, std::ostream& out, std::ostream& err);
int run_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err);
int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int run_cap(const CapOptions& opts, std::ostream& out, std::ostream& err);
int run_aic_scan(const AicScanOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace l0hawkes::cli
