#include "l0hawkes/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "l0hawkes/error.hpp"
#include "l0hawkes/events.hpp"

namespace l0hawkes {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Eigen::MatrixXd nested_matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InputError(std::string(what) + " rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json nested_matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_schema(const json& j, const std::string& schema) {
  if (!j.is_object() || j.value("schema", std::string{}) != schema)
    throw InputError("expected a '" + schema + "' document");
  if (j.value("version", 0) != kSchemaVersion)
    throw InputError("unsupported " + schema + " version " + std::to_string(j.value("version", 0)));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : "nan"; }

}  // namespace

json kernel_to_json(const KernelFamily& k) {
  json j = {{"kind", k.name()}};
  if (k.kind() == KernelKind::Power) j["eta"] = k.eta();
  return j;
}

KernelFamily kernel_from_json(const json& j) {
  const std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "exponential" || kind == "exp") return KernelFamily::exponential();
  if (kind == "power") return KernelFamily::power(j.is_object() ? j.value("eta", 2.0) : 2.0);
  throw InputError("unknown kernel kind '" + kind + "'");
}

json model_to_json(const ModelDocument& doc) {
  const auto& m = doc.model;
  std::vector<double> impact;
  for (Eigen::Index r = 0; r < m.impact.rows(); ++r)
    for (Eigen::Index c = 0; c < m.impact.cols(); ++c) impact.push_back(m.impact(r, c));
  const auto& hp = doc.hyperparams;
  const auto& rep = doc.report;
  return json{
      {"schema", "l0hawkes/model"},
      {"version", kSchemaVersion},
      {"type_names", doc.type_names},
      {"kernel", kernel_to_json(m.kernel)},
      {"epsilon", m.epsilon},
      {"mu", vector_json(m.mu)},
      {"beta", vector_json(m.beta)},
      {"impact", {{"rows", m.impact.rows()}, {"cols", m.impact.cols()}, {"row_major", impact}}},
      {"hyperparameters",
       {{"tau", hp.tau},
        {"nu_a", hp.nu_a},
        {"nu_mu", hp.nu_mu},
        {"nu_beta", hp.nu_beta},
        {"max_iter", hp.max_iter},
        {"tol", hp.tol},
        {"regularizer", to_string(hp.regularizer)},
        {"seed", doc.seed}}},
      {"report",
       {{"iterations", rep.iterations},
        {"converged", rep.converged},
        {"log_likelihood", rep.final_log_likelihood},
        {"cardinality", rep.cardinality},
        {"aic", rep.aic},
        {"objective_trace", rep.objective_trace}}},
  };
}

ModelDocument model_from_json(const json& j) {
  check_schema(j, "l0hawkes/model");
  try {
    ModelDocument doc;
    doc.type_names = j.at("type_names").get<std::vector<std::string>>();
    auto& m = doc.model;
    m.kernel = kernel_from_json(j.at("kernel"));
    m.epsilon = j.at("epsilon").get<double>();
    m.mu = vector_from(j.at("mu"), "mu");
    m.beta = vector_from(j.at("beta"), "beta");
    const auto& imp = j.at("impact");
    const auto rows = imp.at("rows").get<Eigen::Index>();
    const auto cols = imp.at("cols").get<Eigen::Index>();
    const auto data = imp.at("row_major").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw InputError("impact row_major has wrong length");
    m.impact.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m.impact(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    m.validate();
    if (doc.type_names.size() != m.num_types()) throw InputError("type_names length differs from model size");

    if (j.contains("hyperparameters")) {
      const auto& h = j.at("hyperparameters");
      auto& hp = doc.hyperparams;
      hp.tau = h.value("tau", hp.tau);
      hp.nu_a = h.value("nu_a", hp.nu_a);
      hp.nu_mu = h.value("nu_mu", hp.nu_mu);
      hp.nu_beta = h.value("nu_beta", hp.nu_beta);
      hp.max_iter = h.value("max_iter", hp.max_iter);
      hp.tol = h.value("tol", hp.tol);
      hp.regularizer = parse_regularizer(h.value("regularizer", std::string("l0")));
      doc.seed = h.value("seed", std::uint64_t{0});
    }
    if (j.contains("report")) {
      const auto& r = j.at("report");
      auto& rep = doc.report;
      rep.iterations = r.value("iterations", 0);
      rep.converged = r.value("converged", false);
      rep.final_log_likelihood =
          r.contains("log_likelihood") && r["log_likelihood"].is_number() ? r["log_likelihood"].get<double>() : NAN;
      rep.cardinality = r.value("cardinality", std::size_t{0});
      rep.aic = r.contains("aic") && r["aic"].is_number() ? r["aic"].get<double>() : NAN;
      rep.objective_trace = r.value("objective_trace", std::vector<double>{});
    }
    return doc;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file " + path.string());
  out << model_to_json(doc).dump(2) << '\n';
}

ModelDocument load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

SimConfig sim_config_from_json(const json& j) {
  try {
    if (j.contains("preset")) {
      const auto preset = j.at("preset").get<std::string>();
      const auto seed = j.value("seed", std::uint64_t{1});
      if (preset == "sparse5") return sparse5_config(seed);
      if (preset == "dense10") return dense10_config(seed).first;
      throw InputError("unknown preset '" + preset + "'");
    }
    SimConfig c;
    c.baseline = vector_from(j.at("baseline"), "baseline");
    c.adjacency = nested_matrix_from(j.at("adjacency"), "adjacency");
    const auto D = c.baseline.size();
    const auto& dec = j.at("decays");
    if (dec.is_number()) {
      c.decays = Eigen::MatrixXd::Constant(D, D, dec.get<double>());
    } else if (dec.is_array() && !dec.empty() && dec[0].is_number()) {
      const Eigen::VectorXd per_row = vector_from(dec, "decays");
      if (per_row.size() != D) throw InputError("per-type decays must have D entries");
      c.decays = broadcast_row_decays(per_row, D);
    } else {
      c.decays = nested_matrix_from(dec, "decays");
    }
    if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"));
    if (j.contains("horizon")) c.horizon = j.at("horizon").get<double>();
    if (j.contains("target_events")) c.target_events = j.at("target_events").get<std::size_t>();
    if (j.contains("target_band")) {
      const auto band = j.at("target_band").get<std::vector<std::size_t>>();
      if (band.size() != 2) throw InputError("target_band must be [lo, hi]");
      c.target_band = std::pair{band[0], band[1]};
    }
    c.seed = j.value("seed", std::uint64_t{1});
    c.type_names = j.value("type_names", std::vector<std::string>{});
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed simulation config: ") + e.what());
  }
}

json sim_config_to_json(const SimConfig& c) {
  json j = {{"schema", "l0hawkes/sim-config"},
            {"version", kSchemaVersion},
            {"baseline", vector_json(c.baseline)},
            {"adjacency", nested_matrix_json(c.adjacency)},
            {"decays", nested_matrix_json(c.decays)},
            {"kernel", kernel_to_json(c.kernel)},
            {"seed", c.seed},
            {"type_names", c.resolved_type_names()}};
  if (c.horizon) j["horizon"] = *c.horizon;
  if (c.target_events) j["target_events"] = *c.target_events;
  if (c.target_band) j["target_band"] = {c.target_band->first, c.target_band->second};
  return j;
}

SimConfig load_sim_config(const std::filesystem::path& path) { return sim_config_from_json(read_json_file(path)); }

void write_triggering_csv(std::ostream& out, const TriggeringMatrix& q, double min_q) {
  out << "n,i,q\n";
  for (std::size_t n = 1; n <= q.num_events(); ++n) {
    double omitted = 0.0;
    for (const auto& e : q.row(n)) {
      if (e.prob >= min_q) {
        out << n << ',' << e.cause << ',' << format_real(e.prob) << '\n';
      } else {
        omitted += e.prob;
      }
    }
    if (omitted > 0.0) out << n << ",-1," << format_real(omitted) << '\n';
  }
}

std::vector<TriggeringCsvRow> read_triggering_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,i,q") throw InputError("triggering CSV header must be 'n,i,q'");
  std::vector<TriggeringCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw InputError("malformed triggering row '" + line + "'");
    TriggeringCsvRow r{};
    r.n = std::stoul(cells[0]);
    r.i = std::stol(cells[1]);
    std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), r.q);
    rows.push_back(r);
  }
  return rows;
}

void write_truth_csv(std::ostream& out, const Eigen::MatrixXi& truth, const std::vector<std::string>& names) {
  out << "type";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index k = 0; k < truth.rows(); ++k) {
    out << names[static_cast<std::size_t>(k)];
    for (Eigen::Index l = 0; l < truth.cols(); ++l) out << ',' << (truth(k, l) != 0 ? 1 : 0);
    out << '\n';
  }
}

LabelledTruth read_truth_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("truth file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "type") throw InputError("truth header must start with 'type'");
  LabelledTruth t;
  t.names.assign(header.begin() + 1, header.end());
  const auto D = static_cast<Eigen::Index>(t.names.size());
  t.truth = Eigen::MatrixXi::Zero(D, D);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (row >= D || static_cast<Eigen::Index>(cells.size()) != D + 1 || cells[0] != t.names[static_cast<std::size_t>(row)])
      throw InputError("truth row " + std::to_string(row + 1) + " does not match the header labels");
    for (Eigen::Index l = 0; l < D; ++l) {
      const auto& c = cells[static_cast<std::size_t>(l + 1)];
      if (c != "0" && c != "1") throw InputError("truth entries must be 0 or 1");
      t.truth(row, l) = c == "1" ? 1 : 0;
    }
    ++row;
  }
  if (row != D) throw InputError("truth matrix is not square");
  return t;
}

LabelledTruth load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open truth file " + path.string());
  return read_truth_csv(in);
}

Eigen::MatrixXi align_truth(const LabelledTruth& t, const std::vector<std::string>& names) {
  if (names.size() != t.names.size()) throw InputError("truth and model have different numbers of types");
  std::vector<Eigen::Index> pos(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    auto it = std::find(t.names.begin(), t.names.end(), names[k]);
    if (it == t.names.end()) throw InputError("type '" + names[k] + "' is missing from the truth file");
    pos[k] = static_cast<Eigen::Index>(it - t.names.begin());
  }
  const auto D = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXi out(D, D);
  for (Eigen::Index k = 0; k < D; ++k)
    for (Eigen::Index l = 0; l < D; ++l) out(k, l) = t.truth(pos[static_cast<std::size_t>(k)], pos[static_cast<std::size_t>(l)]);
  return out;
}

void write_cap_csv(std::ostream& out, const CapCurve& curve) {
  const std::size_t seeds = curve.tp_seed.empty() ? 0 : curve.tp_seed.front().size();
  out << (curve.axis == ThresholdAxis::Log ? "log_threshold" : "threshold") << ",tp_mean,tn_mean";
  for (std::size_t s = 1; s <= seeds; ++s) out << ",tp_seed_" << s;
  for (std::size_t s = 1; s <= seeds; ++s) out << ",tn_seed_" << s;
  out << '\n';
  for (std::size_t j = 0; j < curve.thresholds.size(); ++j) {
    out << format_real(curve.thresholds[j]) << ',' << format_optional(curve.tp[j]) << ','
        << format_optional(curve.tn[j]);
    for (const auto& v : curve.tp_seed[j]) out << ',' << format_optional(v);
    for (const auto& v : curve.tn_seed[j]) out << ',' << format_optional(v);
    out << '\n';
  }
}

json break_even_to_json(const BreakEven& be, const CapCurve& curve) {
  const bool log_axis = curve.axis == ThresholdAxis::Log;
  return json{{"schema", "l0hawkes/break-even"},
              {"version", kSchemaVersion},
              {"accuracy", be.accuracy},
              {"threshold", be.threshold},
              {"raw_threshold", log_axis ? std::exp(be.threshold) : be.threshold},
              {"axis", log_axis ? "log" : "linear"},
              {"crossing", be.crossing}};
}

}  // namespace l0hawkes
