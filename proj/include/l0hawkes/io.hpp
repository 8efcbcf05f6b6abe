#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "l0hawkes/evaluation.hpp"
#include "l0hawkes/model.hpp"
#include "l0hawkes/simulator.hpp"
#include "l0hawkes/triggering.hpp"

namespace l0hawkes {

inline constexpr int kSchemaVersion = 1;

/// Everything the model file stores: parameters, labels, and how they were fitted.
struct ModelDocument {
  HawkesModel model;
  std::vector<std::string> type_names;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  FitReport report;
};

nlohmann::json model_to_json(const ModelDocument& doc);
ModelDocument model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

/// {"kind": "exponential"} or {"kind": "power", "eta": 2}.
nlohmann::json kernel_to_json(const KernelFamily& k);
KernelFamily kernel_from_json(const nlohmann::json& j);

/// Accepts either explicit parameters or {"preset": "sparse5"|"dense10", "seed": s}.
/// `decays` may be a scalar, a per-receiver vector, or a full D x D matrix.
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& c);
SimConfig load_sim_config(const std::filesystem::path& path);

/// `n,i,q` rows for entries with q >= min_q (i == n is spontaneous). Rows
/// that drop mass get an extra `n,-1,<omitted mass>` line.
void write_triggering_csv(std::ostream& out, const TriggeringMatrix& q, double min_q = 1e-6);

struct TriggeringCsvRow {
  std::size_t n;
  long i;  // -1 for omitted mass
  double q;
};
std::vector<TriggeringCsvRow> read_triggering_csv(std::istream& in);

/// Square 0/1 matrix labelled by type name on both axes:
/// header `type,<name_0>,...`, then `<name_k>,<0|1>,...`.
void write_truth_csv(std::ostream& out, const Eigen::MatrixXi& truth, const std::vector<std::string>& names);
struct LabelledTruth {
  Eigen::MatrixXi truth;
  std::vector<std::string> names;
};
LabelledTruth read_truth_csv(std::istream& in);
LabelledTruth load_truth(const std::filesystem::path& path);
/// Reorders a labelled truth onto `names`; throws InputError if the label sets differ.
Eigen::MatrixXi align_truth(const LabelledTruth& t, const std::vector<std::string>& names);

void write_cap_csv(std::ostream& out, const CapCurve& curve);
nlohmann::json break_even_to_json(const BreakEven& be, const CapCurve& curve);

}  // namespace l0hawkes
