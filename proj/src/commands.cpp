#include "l0hawkes/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "l0hawkes/error.hpp"
#include "l0hawkes/evaluation.hpp"
#include "l0hawkes/events.hpp"
#include "l0hawkes/fit.hpp"
#include "l0hawkes/io.hpp"
#include "l0hawkes/simulator.hpp"
#include "l0hawkes/solvers.hpp"

namespace l0hawkes::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

/// Runs body(0..count-1) on up to `jobs` threads. Results must be written to
/// per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  unsigned workers = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::string fmt(double x) { return format_real(x); }

std::string fmt_rate(const std::optional<double>& v) { return v ? fmt(*v) : "undefined"; }

struct ResolvedSim {
  SimConfig config;
  Eigen::MatrixXi truth;
};

ResolvedSim resolve_sim(const SimulateOptions& opts) {
  if (opts.config.has_value() == opts.preset.has_value())
    throw InputError("simulate needs exactly one of --config or --preset");
  std::string preset;
  json j;
  if (opts.preset) {
    preset = *opts.preset;
    j = {{"preset", preset}, {"seed", opts.seed.value_or(1)}};
  } else {
    std::ifstream in(*opts.config);
    if (!in) throw InputError("cannot open config " + opts.config->string());
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("invalid JSON config: ") + e.what());
    }
    if (opts.seed) j["seed"] = *opts.seed;
    preset = j.value("preset", std::string{});
  }
  ResolvedSim r;
  if (preset == "dense10") {
    auto [c, mask] = dense10_config(j.value("seed", std::uint64_t{1}));
    r.config = std::move(c);
    r.truth = std::move(mask);
  } else {
    r.config = sim_config_from_json(j);
    r.truth = (r.config.adjacency.array() > 0.0).cast<int>();
  }
  return r;
}

struct Dataset {
  std::string label;
  EventSequence events;
  Eigen::MatrixXi truth;
};

std::vector<Dataset> cap_datasets(const CapOptions& opts) {
  if (opts.preset.has_value() == opts.events_dir.has_value())
    throw InputError("cap needs exactly one of --preset or --events-dir");
  std::vector<Dataset> sets;
  if (opts.preset) {
    if (*opts.preset != "sparse5" && *opts.preset != "dense10")
      throw InputError("unknown preset '" + *opts.preset + "'");
    if (opts.seeds.empty()) throw InputError("cap needs at least one seed");
    for (auto seed : opts.seeds) {
      Benchmark b = *opts.preset == "sparse5" ? gen_sparse5(seed) : gen_dense10(seed);
      sets.push_back(Dataset{"seed " + std::to_string(seed), std::move(b.events), std::move(b.truth)});
    }
    return sets;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(*opts.events_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() != ".csv") continue;
    if (name.ends_with(".truth.csv") || name.ends_with(".types.csv")) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no event files in " + opts.events_dir->string());
  for (const auto& f : files) {
    std::optional<TypeDictionary> mapping;
    if (fs::exists(types_sidecar(f))) mapping = load_type_mapping(types_sidecar(f));
    EventSequence seq = load_events(f, mapping);
    Eigen::MatrixXi truth = align_truth(load_truth(truth_sidecar(f)), seq.type_names());
    sets.push_back(Dataset{f.filename().string(), std::move(seq), std::move(truth)});
  }
  return sets;
}

void check_fit_flags(const FitFlags& f) {
  if (f.decay != "exp" && f.decay != "power") throw InputError("--decay must be exp or power");
}

}  // namespace

Hyperparams FitFlags::hyperparams(bool tau_optional) const {
  Hyperparams hp;
  if (tau && gamma) throw InputError("--tau and --gamma are mutually exclusive");
  if (tau) {
    hp.tau = *tau;
  } else if (gamma) {
    hp.tau = tau_from_gamma(*gamma);
  } else if (!tau_optional) {
    throw InputError("one of --tau or --gamma is required");
  }
  hp.nu_a = nu_a;
  hp.nu_mu = nu_mu;
  hp.nu_beta = nu_beta;
  hp.max_iter = max_iter;
  hp.tol = tol;
  hp.regularizer = parse_regularizer(regularizer);
  hp.validate();
  return hp;
}

KernelFamily FitFlags::kernel() const {
  check_fit_flags(*this);
  return decay == "exp" ? KernelFamily::exponential() : KernelFamily::power(eta);
}

fs::path truth_sidecar(const fs::path& events) {
  fs::path p = events;
  return p.replace_extension(".truth.csv");
}

fs::path types_sidecar(const fs::path& events) {
  fs::path p = events;
  return p.replace_extension(".types.csv");
}

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ResolvedSim sim = resolve_sim(opts);
    const double rho = spectral_radius(sim.config.adjacency);
    if (!(rho < 1.0)) {
      std::ostringstream msg;
      msg << std::fixed << std::setprecision(2) << "spectral radius " << rho << " ≥ 1";
      throw NumericalError(msg.str());
    }
    const EventSequence seq = simulate(sim.config);
    save_events(opts.out, seq);
    {
      auto t = open_out(truth_sidecar(opts.out));
      write_truth_csv(t, sim.truth, seq.type_names());
    }
    {
      auto t = open_out(types_sidecar(opts.out));
      write_type_mapping(t, TypeDictionary(seq.type_names()));
    }
    out << "N=" << seq.num_events() << " D=" << seq.num_types() << " spectral_radius=" << fmt(rho) << '\n';
    return kExitOk;
  });
}

int run_fit(const FitOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Hyperparams hp = opts.flags.hyperparams();
    const KernelFamily kernel = opts.flags.kernel();
    std::optional<TypeDictionary> mapping;
    if (opts.mapping) mapping = load_type_mapping(*opts.mapping);
    const EventSequence seq = load_events(opts.events, mapping);
    FitResult result = fit(seq, hp, kernel, opts.flags.epsilon, std::nullopt, opts.flags.seed);

    ModelDocument doc{result.model, seq.type_names(), hp, opts.flags.seed, result.report};
    save_model(opts.out_model, doc);
    if (opts.out_q) {
      auto q = open_out(*opts.out_q);
      write_triggering_csv(q, result.q);
    }
    const auto& r = result.report;
    out << "cardinality=" << r.cardinality << " log_likelihood=" << fmt(r.final_log_likelihood)
        << " aic=" << fmt(r.aic) << " iterations=" << r.iterations << " converged=" << (r.converged ? "true" : "false")
        << '\n';
    return kExitOk;
  });
}

int run_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelDocument doc = load_model(opts.model);
    const TypeDictionary dict(doc.type_names);
    {
      const EventSequence raw = load_events(opts.events);
      for (const auto& name : raw.type_names())
        if (!dict.find(name))
          throw InputError("type dictionary mismatch: event type '" + name + "' is not in the model");
    }
    const EventSequence seq = load_events(opts.events, dict);
    if (opts.index < 1 || opts.index > seq.num_events())
      throw InputError("--index " + std::to_string(opts.index) + " out of range 1.." + std::to_string(seq.num_events()));
    if (!(opts.min_prob >= 0.0 && opts.min_prob <= 1.0)) throw InputError("--min-prob must lie in [0, 1]");

    const std::size_t n = opts.index;
    const auto row = q_row(doc.model, seq, n);
    double self = 0.0;
    double omitted = 0.0;
    std::vector<TriggerEntry> kept;
    for (const auto& e : row) {
      if (e.cause == n) {
        self = e.prob;
      } else if (e.prob >= opts.min_prob) {
        kept.push_back(e);
      } else {
        omitted += e.prob;
      }
    }
    std::stable_sort(kept.begin(), kept.end(), [](const TriggerEntry& a, const TriggerEntry& b) { return a.prob > b.prob; });
    json candidates = json::array();
    for (const auto& e : kept)
      candidates.push_back({{"index", e.cause},
                            {"type", seq.type_name(seq.type(e.cause))},
                            {"time", seq.time(e.cause)},
                            {"probability", e.prob}});
    const json record = {{"schema", "l0hawkes/diagnosis"},
                         {"version", kSchemaVersion},
                         {"target_index", n},
                         {"target_type", seq.type_name(seq.type(n))},
                         {"target_time", seq.time(n)},
                         {"self_probability", self},
                         {"candidates", candidates},
                         {"omitted_mass", omitted},
                         {"min_prob", opts.min_prob}};
    if (opts.out) {
      auto f = open_out(*opts.out);
      f << record.dump(2) << '\n';
    } else {
      out << record.dump(2) << '\n';
    }
    return kExitOk;
  });
}

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelDocument doc = load_model(opts.model);
    const Eigen::MatrixXi truth = align_truth(load_truth(opts.truth), doc.type_names);
    const double eps = opts.epsilon.value_or(doc.model.epsilon);
    if (!(eps > 0.0)) throw InputError("--epsilon must be positive");
    const Accuracy acc = tp_tn_accuracy(doc.model.impact, eps, truth, !opts.include_diagonal);
    const SparsityReport sp = sparsity_report(doc.model.impact, eps);
    out << "TP=" << fmt_rate(acc.tp) << " (positives=" << acc.positives << ")"
        << " TN=" << fmt_rate(acc.tn) << " (negatives=" << acc.negatives << ")"
        << " cardinality=" << sp.cardinality << " max_entry=" << fmt(sp.max_entry) << " epsilon=" << fmt(eps)
        << " epsilon_over_max=" << (sp.max_entry > 0.0 ? fmt(eps / sp.max_entry) : "undefined") << '\n';
    return kExitOk;
  });
}

int run_cap(const CapOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.taus.size() < 2) throw InputError("cap needs at least 2 --taus values");
    Hyperparams base = opts.flags.hyperparams(/*tau_optional=*/true);
    const KernelFamily kernel = opts.flags.kernel();
    const double eps = opts.flags.epsilon;
    const std::vector<Dataset> sets = cap_datasets(opts);

    std::vector<double> taus = opts.taus;
    std::sort(taus.begin(), taus.end());
    const std::size_t S = sets.size();
    std::vector<std::optional<Eigen::MatrixXd>> estimates(taus.size() * S);
    std::vector<std::string> failures(taus.size() * S);

    if (opts.frozen_stats) {
      std::vector<std::optional<SuffStats>> frozen(S);
      std::vector<std::string> frozen_fail(S);
      parallel_for(S, opts.jobs, [&](std::size_t s) {
        try {
          Hyperparams hp = base;
          hp.tau = 0.0;
          const FitResult r = fit(sets[s].events, hp, kernel, eps, std::nullopt, opts.flags.seed);
          frozen[s] = accumulate_stats(r.q, sets[s].events, r.model);
        } catch (const std::exception& e) {
          frozen_fail[s] = e.what();
        }
      });
      for (std::size_t t = 0; t < taus.size(); ++t) {
        for (std::size_t s = 0; s < S; ++s) {
          const std::size_t cell = t * S + s;
          if (!frozen[s]) {
            failures[cell] = frozen_fail[s];
            continue;
          }
          Hyperparams hp = base;
          hp.tau = taus[t];
          estimates[cell] = solve_impact(*frozen[s], hp, eps);
        }
      }
    } else {
      parallel_for(taus.size() * S, opts.jobs, [&](std::size_t cell) {
        const std::size_t t = cell / S, s = cell % S;
        try {
          Hyperparams hp = base;
          hp.tau = taus[t];
          estimates[cell] = fit(sets[s].events, hp, kernel, eps, std::nullopt, opts.flags.seed).model.impact;
        } catch (const std::exception& e) {
          failures[cell] = e.what();
        }
      });
    }

    std::vector<CapCell> cells;
    for (std::size_t t = 0; t < taus.size(); ++t) {
      CapCell c{taus[t], {}};
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t cell = t * S + s;
        if (!estimates[cell])
          err << "warning: fit failed for tau=" << fmt(taus[t]) << " " << sets[s].label << ": " << failures[cell] << '\n';
        c.per_seed.push_back(estimates[cell]);
      }
      cells.push_back(std::move(c));
    }
    std::vector<Eigen::MatrixXi> truths;
    for (const auto& d : sets) truths.push_back(d.truth);
    const CapCurve curve = cap_curve(std::move(cells), truths, eps, !opts.include_diagonal);
    {
      auto f = open_out(opts.out_csv);
      write_cap_csv(f, curve);
    }
    const BreakEven be = break_even(curve);
    const fs::path be_path = opts.out_break_even.value_or(fs::path(opts.out_csv).replace_extension(".breakeven.json"));
    {
      auto f = open_out(be_path);
      f << break_even_to_json(be, curve).dump() << '\n';
    }
    out << "break_even accuracy=" << fmt(be.accuracy) << " threshold=" << fmt(be.threshold)
        << " axis=" << (curve.axis == ThresholdAxis::Log ? "log" : "linear")
        << " crossing=" << (be.crossing ? "true" : "false") << '\n';
    return kExitOk;
  });
}

std::optional<std::size_t> best_aic_cell(const std::vector<AicCandidate>& cells) {
  std::optional<std::size_t> best;
  const auto key = [](const AicCandidate& c) { return std::tuple(c.aic, c.cardinality, c.tau); };
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!std::isfinite(cells[c].aic)) continue;
    if (!best || key(cells[c]) < key(cells[*best])) best = c;
  }
  return best;
}

int run_aic_scan(const AicScanOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Hyperparams base = opts.flags.hyperparams(/*tau_optional=*/true);
    const KernelFamily kernel = opts.flags.kernel();
    const auto axis = [](std::vector<double> v, double fallback) {
      if (v.empty()) v.push_back(fallback);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v;
    };
    const auto taus = axis(opts.taus, base.tau);
    const auto epss = axis(opts.epsilons, opts.flags.epsilon);
    const auto nu_as = axis(opts.nu_as, base.nu_a);
    const auto nu_mus = axis(opts.nu_mus, base.nu_mu);
    const auto nu_betas = axis(opts.nu_betas, base.nu_beta);

    struct Cell {
      Hyperparams hp;
      double eps;
      std::optional<FitReport> report;
      std::string failure;
    };
    std::vector<Cell> cells;
    for (double tau : taus)
      for (double eps : epss)
        for (double na : nu_as)
          for (double nm : nu_mus)
            for (double nb : nu_betas) {
              Hyperparams hp = base;
              hp.tau = tau;
              hp.nu_a = na;
              hp.nu_mu = nm;
              hp.nu_beta = nb;
              cells.push_back(Cell{hp, eps, std::nullopt, {}});
            }

    std::optional<TypeDictionary> mapping;
    if (opts.mapping) mapping = load_type_mapping(*opts.mapping);
    const EventSequence seq = load_events(opts.events, mapping);
    parallel_for(cells.size(), opts.jobs, [&](std::size_t c) {
      try {
        cells[c].report = fit(seq, cells[c].hp, kernel, cells[c].eps, std::nullopt, opts.flags.seed).report;
      } catch (const std::exception& e) {
        cells[c].failure = e.what();
      }
    });

    auto f = open_out(opts.out_csv);
    f << "tau,epsilon,nu_a,nu_mu,nu_beta,log_likelihood,cardinality,aic,iterations,converged,status\n";
    std::vector<AicCandidate> candidates;
    std::vector<std::size_t> owners;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      f << fmt(cell.hp.tau) << ',' << fmt(cell.eps) << ',' << fmt(cell.hp.nu_a) << ',' << fmt(cell.hp.nu_mu) << ','
        << fmt(cell.hp.nu_beta) << ',';
      if (!cell.report) {
        f << "nan,,nan,,,failed\n";
        err << "warning: cell " << c << " failed: " << cell.failure << '\n';
        continue;
      }
      const auto& r = *cell.report;
      f << fmt(r.final_log_likelihood) << ',' << r.cardinality << ',' << fmt(r.aic) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << ",ok\n";
      candidates.push_back(AicCandidate{r.aic, r.cardinality, cell.hp.tau});
      owners.push_back(c);
    }
    const auto pick = best_aic_cell(candidates);
    const std::optional<std::size_t> best = pick ? std::optional(owners[*pick]) : std::nullopt;
    if (!best) throw NumericalError("no grid cell produced a finite AIC");
    const auto& b = cells[*best];
    out << "best tau=" << fmt(b.hp.tau) << " epsilon=" << fmt(b.eps) << " nu_a=" << fmt(b.hp.nu_a)
        << " nu_mu=" << fmt(b.hp.nu_mu) << " nu_beta=" << fmt(b.hp.nu_beta) << " aic=" << fmt(b.report->aic)
        << " cardinality=" << b.report->cardinality << '\n';
    return kExitOk;
  });
}

}  // namespace l0hawkes::cli
