// Copyright 2026 The fewcopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fewcopy/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fewcopy/detect.hpp"
#include "fewcopy/errors.hpp"
#include "fewcopy/qsv.hpp"
#include "fewcopy/shadow.hpp"
#include "fewcopy/stats.hpp"
#include "fewcopy/version.hpp"
#include "fewcopy/witness.hpp"

namespace fewcopy {

namespace {

using nlohmann::json;

const json &doc_of(const ExperimentConfig &c) {
  return *std::static_pointer_cast<const json>(c.doc);
}

void check_keys(const json &j, const std::set<std::string> &allowed,
                const std::string &where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
T req(const json &j, const std::string &key) {
  if (!j.contains(key)) throw ConfigError("missing required field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

template <typename T>
T opt(const json &j, const std::string &key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

StateVector state_from_name(const std::string &name, int cap = kDefaultQubitCap) {
  try {
    return prepare_named_state(name, cap);
  } catch (const CapacityError &) {
    throw;
  } catch (const std::exception &e) {
    throw ConfigError(std::string("bad state spec: ") + e.what());
  }
}

NoisyStateSource source_from_config(const json &j, const StateVector &target, uint64_t seed,
                                    int cap = kDefaultQubitCap) {
  if (!j.contains("noise")) return NoisyStateSource(target, seed);
  const json &nj = j.at("noise");
  check_keys(nj, {"lambda", "state"}, "noise");
  double lambda = req<double>(nj, "lambda");
  std::string noise_name = opt<std::string>(nj, "state",
                                            "zeros:" + std::to_string(target.n_qubits()));
  StateVector noise = state_from_name(noise_name, cap);
  return NoisyStateSource(target, std::move(noise), lambda, seed);
}

// ---- per-round CSV -------------------------------------------------------

struct CsvRow {
  uint64_t round;
  uint64_t check;
  std::string setting;
  int outcome;
};

void write_rounds_csv(const std::filesystem::path &path, const std::string &protocol,
                      double bound, uint64_t checks_per_round,
                      const std::vector<CsvRow> &rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# fewcopy per-round log v1\n";
  out << "# protocol " << protocol << "\n";
  std::ostringstream bs;
  if (std::isnan(bound)) bs << "nan";
  else bs << bound;
  out << "# bound " << bs.str() << " checks_per_round " << checks_per_round << "\n";
  out << "round,check,setting,outcome,running_success_rate\n";
  uint64_t seen = 0, succ = 0;
  char buf[64];
  for (const auto &r : rows) {
    ++seen;
    succ += static_cast<uint64_t>(r.outcome);
    std::snprintf(buf, sizeof buf, "%.10g", static_cast<double>(succ) / seen);
    out << r.round << ',' << r.check << ',' << r.setting << ',' << r.outcome << ',' << buf
        << "\n";
  }
}

std::vector<CsvRow> detect_rows(const DetectionRun &run) {
  std::vector<CsvRow> rows;
  rows.reserve(run.round_log.size());
  for (const auto &e : run.round_log) {
    std::string setting;
    if (run.protocol == DetectProtocol::singlet) {
      setting = std::array{"XX", "YY", "ZZ"}[e.setting];
    } else if (run.protocol == DetectProtocol::lcs) {
      setting = std::array{"ZXZZ", "ZZXZ", "ZYYZ"}[e.setting];
    } else {
      setting = "random_paulis";
    }
    rows.push_back({e.round, e.check, setting, e.outcome});
  }
  return rows;
}

json detection_summary(const DetectionRun &run) {
  json s;
  s["repetitions"] = run.repetitions;
  s["checks_per_rep"] = run.checks_per_rep;
  s["success_rate"] = run.success_rate;
  s["epsilon"] = run.epsilon;
  s["s_overall"] = run.s_overall;
  s["overall_pass_rate"] = run.overall_pass_rate;
  s["confidence_lower_bound"] = run.confidence_lower_bound;
  if (!std::isnan(run.separable_bound)) s["separable_bound"] = run.separable_bound;
  return s;
}

// ---- witness / hamiltonian specs ----------------------------------------

SamplingTable witness_from_file(const std::filesystem::path &path, const StateVector *target) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open witness file " + path.string());
  double gamma_s = 0;
  bool have_gamma = false;
  int n_qubits = -1;
  std::vector<std::pair<double, SparsePauli>> terms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line.substr(0, line.find('#'));
    std::istringstream ls(trimmed);
    std::string head;
    if (!(ls >> head)) continue;
    auto fail = [&](const std::string &msg) {
      throw ConfigError("witness file " + path.string() + ":" + std::to_string(lineno) + ": " +
                        msg);
    };
    if (head == "gamma_s") {
      if (!(ls >> gamma_s)) fail("expected a number after gamma_s");
      have_gamma = true;
    } else if (head == "n_qubits") {
      if (!(ls >> n_qubits)) fail("expected a count after n_qubits");
    } else if (head == "term") {
      double w;
      if (!(ls >> w)) fail("expected a weight after term");
      SparsePauli word;
      std::string tok;
      while (ls >> tok) {
        if (tok == "I") continue;
        if (tok.size() < 2) fail("bad pauli token " + tok);
        PauliBasis b;
        try {
          b = basis_from_char(tok[0]);
        } catch (const std::exception &) {
          fail("bad pauli letter in " + tok);
          throw;
        }
        int q = 0;
        try {
          q = std::stoi(tok.substr(1));
        } catch (const std::exception &) {
          fail("bad qubit index in " + tok);
        }
        if (!word.factors.emplace(q, b).second) fail("duplicate qubit in term");
      }
      terms.emplace_back(w, std::move(word));
    } else {
      fail("unknown directive " + head);
    }
  }
  if (!have_gamma) throw ConfigError("witness file missing gamma_s");
  if (n_qubits < 1) throw ConfigError("witness file missing n_qubits");
  if (terms.empty()) throw ConfigError("witness file has no terms");
  return pauli_sum_witness(gamma_s, terms, n_qubits, target);
}

std::vector<SignedPauli> lcs_generators(int n) {
  std::vector<SignedPauli> gens;
  for (int k = 0; k < n; ++k) {
    SignedPauli g;
    g.word.factors.emplace(k, PauliBasis::X);
    g.word.factors.emplace((k + n - 1) % n, PauliBasis::Z);
    g.word.factors.emplace((k + 1) % n, PauliBasis::Z);
    gens.push_back(std::move(g));
  }
  return gens;
}

SamplingTable witness_from_spec(const json &j, const std::filesystem::path &base_dir,
                                const StateVector *target) {
  const json &spec = j.at("witness");
  if (spec.is_object()) {
    check_keys(spec, {"file"}, "witness");
    std::filesystem::path p = req<std::string>(spec, "file");
    if (p.is_relative()) p = base_dir / p;
    return witness_from_file(p, target);
  }
  std::string name = spec.get<std::string>();
  if (name == "w1_cluster6") return witness_w1_cluster6();
  if (name == "w2_cluster6") return witness_w2_cluster6();
  if (name.rfind("generic_lcs:", 0) == 0) {
    int n = std::stoi(name.substr(12));
    if (n < 3) throw ConfigError("generic_lcs needs n >= 3");
    return generic_stabilizer_witness(lcs_generators(n), n);
  }
  throw ConfigError("unknown witness '" + name + "'");
}

LocalHamiltonian hamiltonian_from_spec(const std::string &name) {
  if (name.rfind("heisenberg:", 0) == 0) {
    std::string rest = name.substr(11);
    bool periodic = true;
    size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      std::string b = rest.substr(colon + 1);
      if (b == "open") periodic = false;
      else if (b != "periodic") throw ConfigError("bad boundary '" + b + "'");
      rest = rest.substr(0, colon);
    }
    return heisenberg_chain(std::stoi(rest), periodic);
  }
  throw ConfigError("unknown hamiltonian '" + name + "'");
}

// ---- sqst qudit sources --------------------------------------------------

QuditSource qudit_source_from_spec(const std::string &name, int d) {
  if (name.rfind("qudit_basis:", 0) == 0) {
    int k = std::stoi(name.substr(12));
    if (k < 0 || k >= d) throw ConfigError("qudit basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(k) = 1.0;
    return QuditSource(std::move(v), name);
  }
  if (name == "qudit_uniform") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(double(d)));
    return QuditSource(std::move(v), name);
  }
  if (name == "qudit_mixed") {
    return QuditSource(d, [d](std::mt19937_64 &rng) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v(static_cast<int>(rng() % d)) = 1.0;
      return v;
    }, name);
  }
  if (name == "qudit_haar") {
    return QuditSource(d, [d](std::mt19937_64 &rng) {
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::VectorXcd v(d);
      for (int i = 0; i < d; ++i) v(i) = std::complex<double>(g(rng), g(rng));
      v.normalize();
      return v;
    }, name);
  }
  // fall back to a named qubit state when d is a power of two
  StateVector s = state_from_name(name);
  if (static_cast<int>(s.dim()) != d) {
    throw ConfigError("state dimension does not match d");
  }
  Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), s.amplitudes().size());
  return QuditSource(Eigen::VectorXcd(v), name);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path.parent_path());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string &text,
                                                  const std::filesystem::path &base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::string schema = opt<std::string>(j, "schema", "");
  if (schema != "fewcopy-config-v1") {
    throw ConfigError("config schema must be \"fewcopy-config-v1\"");
  }
  ExperimentConfig c;
  c.protocol = req<std::string>(j, "protocol");
  if (!j.contains("seed")) throw ConfigError("seed is mandatory");
  c.seed = req<uint64_t>(j, "seed");
  c.threads = opt<int>(j, "threads", 1);
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  c.raw_json = j.dump(2);
  c.doc = std::make_shared<json>(std::move(j));
  c.base_dir = base;
  return c;
}

RunPaths run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                        const std::string &stem) {
  const json &j = doc_of(config);
  std::filesystem::create_directories(out_dir);
  RunPaths paths;
  paths.report_json = out_dir / (stem + ".report.json");
  paths.rounds_csv = out_dir / (stem + ".rounds.csv");

  auto t0 = std::chrono::steady_clock::now();
  json summary;
  bool have_rounds = true;
  const std::set<std::string> base_keys = {"schema", "protocol", "seed", "threads"};

  DetectOptions dopts;
  dopts.threads = config.threads;

  if (config.protocol == "singlet") {
    auto keys = base_keys;
    keys.insert({"n_pairs", "repetitions", "state", "noise", "fixed_epsilon",
                 "fixed_settings"});
    check_keys(j, keys, "config");
    int n_pairs = req<int>(j, "n_pairs");
    uint64_t reps = opt<uint64_t>(j, "repetitions", 1);
    StateVector target = state_from_name(
        opt<std::string>(j, "state", "singlet_product:" + std::to_string(n_pairs)));
    NoisyStateSource source = source_from_config(j, target, config.seed);
    if (j.contains("fixed_epsilon")) dopts.fixed_epsilon = req<double>(j, "fixed_epsilon");
    if (j.contains("fixed_settings")) {
      dopts.fixed_settings = req<std::vector<int>>(j, "fixed_settings");
    }
    DetectionRun run = run_singlet_protocol(source, n_pairs, reps, config.seed, dopts);
    summary = detection_summary(run);
    write_rounds_csv(paths.rounds_csv, "singlet", run.separable_bound, run.checks_per_rep,
                     detect_rows(run));
  } else if (config.protocol == "lcs") {
    auto keys = base_keys;
    keys.insert({"n", "repetitions", "backend", "input", "fixed_epsilon"});
    check_keys(j, keys, "config");
    int n = req<int>(j, "n");
    if (n % 3 != 0) throw ConfigError("lcs needs n = 3L");
    uint64_t reps = opt<uint64_t>(j, "repetitions", 1);
    std::string backend = opt<std::string>(j, "backend", "auto");
    std::string input = opt<std::string>(j, "input", "ideal");
    bool tableau = backend == "stabilizer" || (backend == "auto" && n > kDefaultQubitCap);
    if (backend != "auto" && backend != "stabilizer" && backend != "statevector") {
      throw ConfigError("backend must be auto, statevector or stabilizer");
    }
    // explicit statevector requests may use the hard cap; auto stays at the
    // default
    int cap = backend == "statevector" ? kHardQubitCap : kDefaultQubitCap;
    LcsBackend be = [&] {
      if (input == "ideal") {
        return tableau ? LcsBackend{init_linear_cluster(n, true)}
                       : LcsBackend::ideal_cluster(n, cap);
      }
      if (input == "zeros") return LcsBackend::product_zeros(n, tableau);
      throw ConfigError("input must be 'ideal' or 'zeros'");
    }();
    if (j.contains("fixed_epsilon")) dopts.fixed_epsilon = req<double>(j, "fixed_epsilon");
    DetectionRun run = run_lcs_protocol(be, n, n / 3, reps, config.seed, dopts);
    summary = detection_summary(run);
    summary["backend"] = tableau ? "stabilizer" : "statevector";
    write_rounds_csv(paths.rounds_csv, "lcs", run.separable_bound, run.checks_per_rep,
                     detect_rows(run));
  } else if (config.protocol == "hamiltonian") {
    auto keys = base_keys;
    keys.insert({"hamiltonian", "state", "delta", "delta_frac", "repetitions"});
    check_keys(j, keys, "config");
    LocalHamiltonian h = hamiltonian_from_spec(req<std::string>(j, "hamiltonian"));
    StateVector ground = solve_ground_state(h);
    std::string state_name = opt<std::string>(j, "state", "ground");
    StateVector input = state_name == "ground" ? ground : state_from_name(state_name);
    double delta = j.contains("delta")
                       ? req<double>(j, "delta")
                       : opt<double>(j, "delta_frac", 0.5) * h.entanglement_gap();
    uint64_t reps = opt<uint64_t>(j, "repetitions", 1000);
    NoisyStateSource source(input, config.seed);
    DetectionRun run = run_hamiltonian_protocol(h, source, delta, reps, config.seed, dopts);
    summary = detection_summary(run);
    summary["eps_sep"] = h.eps_sep;
    summary["eps_0"] = h.eps_0;
    summary["delta"] = delta;
    write_rounds_csv(paths.rounds_csv, "hamiltonian", run.separable_bound, run.checks_per_rep,
                     detect_rows(run));
  } else if (config.protocol == "witness") {
    auto keys = base_keys;
    keys.insert({"witness", "state", "noise", "repetitions"});
    check_keys(j, keys, "config");
    StateVector target = state_from_name(opt<std::string>(j, "state", "cluster6_h"));
    SamplingTable table = witness_from_spec(j, config.base_dir, &target);
    uint64_t reps = opt<uint64_t>(j, "repetitions", 16);
    NoisyStateSource source = source_from_config(j, target, config.seed);
    WitnessOptions wopts;
    wopts.threads = config.threads;
    WitnessRunResult run = run_witness_protocol(table, source, reps, config.seed, wopts);
    summary["repetitions"] = run.repetitions;
    summary["success_rate"] = run.success_rate;
    summary["p_s"] = run.p_s;
    summary["epsilon"] = run.epsilon;
    summary["confidence_lower_bound"] = run.c_min;
    if (table.p_e) {
      summary["p_e"] = *table.p_e;
      summary["copies_needed_99"] = copies_needed(*table.p_e, table.p_s, 0.01);
    }
    std::vector<CsvRow> rows;
    rows.reserve(run.round_log.size());
    for (const auto &e : run.round_log) {
      rows.push_back({e.round, 0, std::to_string(e.entry), e.outcome});
    }
    write_rounds_csv(paths.rounds_csv, "witness", table.p_s, 1, rows);
  } else if (config.protocol == "qsv") {
    auto keys = base_keys;
    keys.insert({"strategy", "state", "noise", "epsilon", "delta"});
    check_keys(j, keys, "config");
    std::string strat_name = opt<std::string>(j, "strategy", "singlet_xyz");
    StateVector target = state_from_name(opt<std::string>(j, "state", "singlet_product:1"));
    QsvStrategy strategy = [&] {
      if (strat_name == "singlet_xyz") return singlet_xyz_strategy();
      if (strat_name == "target_projector") return projector_strategy(target);
      throw ConfigError("unknown strategy '" + strat_name + "'");
    }();
    double eps = req<double>(j, "epsilon");
    double delta = req<double>(j, "delta");
    NoisyStateSource source = source_from_config(j, target, config.seed);
    QsvVerdict verdict = qsv_run(strategy, source, eps, delta, config.seed);
    summary["nu"] = strategy.nu();
    summary["second_eigenvalue"] = strategy.second_eigenvalue();
    summary["rounds_planned"] = verdict.rounds_planned;
    summary["rounds_run"] = verdict.rounds_run;
    summary["accepted"] = verdict.accepted;
    if (!verdict.accepted) summary["failed_round"] = verdict.failed_round;
    std::vector<CsvRow> rows;
    for (uint64_t r = 0; r < verdict.rounds_run; ++r) {
      bool passed = verdict.accepted || static_cast<int64_t>(r) != verdict.failed_round;
      rows.push_back({r, 0, "strategy", passed ? 1 : 0});
    }
    write_rounds_csv(paths.rounds_csv, "qsv", std::numeric_limits<double>::quiet_NaN(), 1,
                     rows);
  } else if (config.protocol == "sqst") {
    auto keys = base_keys;
    keys.insert({"d", "state", "epsilon", "delta", "m_estimates", "repetitions", "elements"});
    check_keys(j, keys, "config");
    int d = req<int>(j, "d");
    MubFamily fam = build_mub(d);
    QuditSource source = qudit_source_from_spec(opt<std::string>(j, "state", "qudit_uniform"), d);
    double delta = opt<double>(j, "delta", 0.01);
    uint64_t n;
    if (j.contains("repetitions")) {
      n = req<uint64_t>(j, "repetitions");
    } else {
      double eps = opt<double>(j, "epsilon", 0.1);
      uint64_t m = opt<uint64_t>(j, "m_estimates", 1);
      n = sqst_sample_size(eps, delta, m);
    }
    MeasurementRecord off = sqst_collect(source, fam, n,
                                         MeasurementRecord::Mode::offdiag_mub, config.seed);
    MeasurementRecord dia = sqst_collect(source, fam, n,
                                         MeasurementRecord::Mode::diag_computational,
                                         config.seed + 1);
    auto off_path = out_dir / (stem + ".offdiag.rec");
    auto dia_path = out_dir / (stem + ".diag.rec");
    {
      std::ofstream o1(off_path), o2(dia_path);
      off.serialize(o1);
      dia.serialize(o2);
    }
    paths.extra_files = {off_path, dia_path};
    summary["d"] = d;
    summary["record_length"] = n;
    summary["estimates"] = json::array();
    auto elements = opt<std::vector<std::vector<int>>>(j, "elements", {{0, 1}});
    for (const auto &el : elements) {
      if (el.size() != 2) throw ConfigError("elements entries must be [i, j]");
      EstimateWithError est = sqst_estimate_element(off, &dia, el[0], el[1], fam, delta);
      json e;
      e["i"] = el[0];
      e["j"] = el[1];
      e["re"] = est.value.real();
      e["im"] = est.value.imag();
      e["epsilon"] = est.epsilon;
      e["delta"] = est.delta;
      e["n_used"] = est.n_used;
      summary["estimates"].push_back(e);
    }
    have_rounds = false;
  } else if (config.protocol == "shadows") {
    auto keys = base_keys;
    keys.insert({"state", "noise", "ensemble", "repetitions", "k_groups", "observables"});
    check_keys(j, keys, "config");
    StateVector target = state_from_name(req<std::string>(j, "state"));
    NoisyStateSource source = source_from_config(j, target, config.seed);
    std::string ens_name = opt<std::string>(j, "ensemble", "pauli");
    auto ensemble = ens_name == "pauli" ? ShadowSnapshotSet::Ensemble::random_pauli
                   : ens_name == "clifford" ? ShadowSnapshotSet::Ensemble::random_clifford
                   : throw ConfigError("ensemble must be pauli or clifford");
    uint64_t n_snap = opt<uint64_t>(j, "repetitions", 10000);
    uint64_t k_groups = opt<uint64_t>(j, "k_groups", 10);
    ShadowSnapshotSet set = shadows_collect(source, n_snap, ensemble, config.seed);
    auto snap_path = out_dir / (stem + ".shadows.rec");
    {
      std::ofstream o(snap_path);
      set.serialize(o);
    }
    paths.extra_files = {snap_path};
    summary["ensemble"] = ens_name;
    summary["snapshots"] = n_snap;
    summary["k_groups"] = k_groups;
    summary["estimates"] = json::array();
    auto obs_names = opt<std::vector<std::string>>(j, "observables", {"target_fidelity"});
    for (const auto &name : obs_names) {
      ObservableMatrix a = [&] {
        if (name == "target_fidelity") {
          Eigen::Map<const Eigen::VectorXcd> psi(target.amplitudes().data(),
                                                 target.amplitudes().size());
          return ObservableMatrix(psi * psi.adjoint());
        }
        // a pauli word such as "X0 Z2"
        SparsePauli word;
        std::istringstream ws(name);
        std::string tok;
        while (ws >> tok) {
          if (tok.size() < 2) throw ConfigError("bad observable token " + tok);
          word.factors.emplace(std::stoi(tok.substr(1)), basis_from_char(tok[0]));
        }
        return ObservableMatrix(dense_pauli(SignedPauli{word, 1}, target.n_qubits()));
      }();
      EstimateWithError est = shadows_estimate(set, a, k_groups);
      json e;
      e["observable"] = name;
      e["value"] = est.value.real();
      e["epsilon"] = est.epsilon;
      e["delta"] = est.delta;
      e["n_used"] = est.n_used;
      summary["estimates"].push_back(e);
    }
    have_rounds = false;
  } else {
    throw ConfigError("unknown protocol '" + config.protocol + "'");
  }

  double wall_ms = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - t0).count();

  json report;
  report["schema"] = "fewcopy-report-v1";
  report["library_version"] = kVersion;
  report["config"] = doc_of(config);
  report["summary"] = summary;
  report["rounds_csv"] = have_rounds ? paths.rounds_csv.filename().string() : "";
  report["wall_clock_ms"] = wall_ms;
  std::ofstream out(paths.report_json);
  if (!out) throw std::runtime_error("cannot write " + paths.report_json.string());
  out << report.dump(2) << "\n";
  if (!have_rounds) paths.rounds_csv.clear();
  return paths;
}

std::vector<std::pair<uint64_t, double>> emit_confidence_curve(
    const std::filesystem::path &report_or_csv, const std::filesystem::path &out_csv) {
  std::filesystem::path csv = report_or_csv;
  if (report_or_csv.extension() == ".json") {
    std::ifstream in(report_or_csv);
    if (!in) throw ConfigError("cannot open report " + report_or_csv.string());
    json report;
    try {
      report = json::parse(in);
    } catch (const json::parse_error &e) {
      throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    if (opt<std::string>(report, "schema", "") != "fewcopy-report-v1") {
      throw ConfigError("not a fewcopy report");
    }
    check_keys(report,
               {"schema", "library_version", "config", "summary", "rounds_csv",
                "wall_clock_ms"},
               "report");
    std::string name = opt<std::string>(report, "rounds_csv", "");
    if (name.empty()) throw ConfigError("report has no per-round log");
    csv = report_or_csv.parent_path() / name;
  }

  std::ifstream in(csv);
  if (!in) throw ConfigError("cannot open per-round log " + csv.string());
  std::string line;
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool have_bound = false;
  std::vector<std::pair<uint64_t, int>> checks;  // (round, outcome)
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        if (tok == "bound") {
          std::string v;
          ls >> v;
          if (v != "nan") {
            bound = std::stod(v);
            have_bound = true;
          }
        }
      }
      continue;
    }
    if (line.rfind("round,", 0) == 0) continue;  // header
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ConfigError("malformed per-round log line: " + line);
    checks.emplace_back(std::stoull(cells[0]), std::stoi(cells[3]));
  }
  if (checks.empty()) throw ConfigError("per-round log is empty");

  std::vector<std::pair<uint64_t, double>> curve;
  uint64_t seen = 0, succ = 0, copies = 0;
  size_t i = 0;
  while (i < checks.size()) {
    uint64_t round = checks[i].first;
    while (i < checks.size() && checks[i].first == round) {
      ++seen;
      succ += static_cast<uint64_t>(checks[i].second);
      ++i;
    }
    ++copies;
    double c = 0.0;
    if (have_bound) {
      double rate = static_cast<double>(succ) / static_cast<double>(seen);
      c = ConfidenceBound::from_rate(rate, bound, seen).c_min;
    }
    curve.emplace_back(copies, c);
  }

  std::ofstream out(out_csv);
  if (!out) throw std::runtime_error("cannot write " + out_csv.string());
  out << "copies,c_min\n";
  char buf[64];
  for (const auto &[n, c] : curve) {
    std::snprintf(buf, sizeof buf, "%.10g", c);
    out << n << ',' << buf << "\n";
  }
  return curve;
}

}  // namespace fewcopy
