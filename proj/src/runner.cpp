// Copyright 2026 The qbench authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbench/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "CLI11.hpp"
#include "qbench/circuits.hpp"

namespace qbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

ParseError::ParseError(const std::string &msg, std::size_t off)
    : std::runtime_error(msg + " at byte " + std::to_string(off)),
      offset(off) {}

SchemaError::SchemaError(const std::string &f, const std::string &msg)
    : std::runtime_error("field '" + f + "': " + msg), field(f) {}

JobsPending::JobsPending(const std::vector<std::string> &ids)
    : std::runtime_error("jobs still pending: " +
                         [&] {
                           std::string s;
                           for (const auto &id : ids) {
                             if (!s.empty()) s += ", ";
                             s += id;
                           }
                           return s;
                         }()),
      pending_ids(ids) {}

// ---------------------------------------------------------------------------
// Angle expressions: expr := term (('+'|'-') term)*;
// term := factor (('*'|'/') factor)*; factor := number | 'pi' | '(' expr ')'
// | '-' factor.
// ---------------------------------------------------------------------------

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string &s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw ParseError("unexpected trailing characters", pos_);
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  double expr() {
    double v = term();
    for (;;) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        const double rhs = term();
        v = (c == '+') ? v + rhs : v - rhs;
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        const double rhs = factor();
        if (c == '/') {
          if (rhs == 0.0) throw DivisionByZero("division by zero");
          v /= rhs;
        } else {
          v *= rhs;
        }
      } else {
        return v;
      }
    }
  }

  double factor() {
    const char c = peek();
    if (c == '\0') throw ParseError("unexpected end of expression", pos_);
    if (c == '(') {
      ++pos_;
      const double v = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return v;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (s_.compare(pos_, 2, "pi") == 0 &&
        (pos_ + 2 >= s_.size() ||
         !std::isalnum(static_cast<unsigned char>(s_[pos_ + 2])))) {
      pos_ += 2;
      return kPi;
    }
    const char *begin = s_.c_str() + pos_;
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected a number, 'pi' or '('", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  const std::string &s_;
  std::size_t pos_ = 0;
};

}  // namespace

double parse_angle_expr(const std::string &text) {
  return ExprParser(text).parse();
}

std::vector<double> angle_grid(const AngleRange &r) {
  const double a = r.start(), b = r.stop();
  const int n = r.num_steps;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = a + k * (b - a) / (n - 1);
  out.front() = a;
  out.back() = b;
  return out;
}

// ---------------------------------------------------------------------------
// YAML schemas.
// ---------------------------------------------------------------------------

namespace {

void reject_unknown_fields(const YAML::Node &node,
                           const std::set<std::string> &known,
                           const char *context) {
  for (const auto &kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key))
      throw SchemaError(key, std::string("unknown field in ") + context);
  }
}

YAML::Node require(const YAML::Node &node, const std::string &field) {
  const YAML::Node v = node[field];
  if (!v) throw SchemaError(field, "missing required field");
  return v;
}

ExperimentConfig experiment_from_node(const YAML::Node &n) {
  if (!n.IsMap()) throw SchemaError("(root)", "experiment must be a mapping");
  reject_unknown_fields(n,
                        {"type", "qubits", "angles", "delta", "gateset",
                         "method", "num_shots"},
                        "experiment");
  ExperimentConfig c;
  c.type = require(n, "type").as<std::string>();
  if (c.type != "certification-fourier")
    throw SchemaError("type", "expected 'certification-fourier'");

  const YAML::Node qubits = require(n, "qubits");
  if (!qubits.IsSequence() || qubits.size() == 0)
    throw SchemaError("qubits", "expected a nonempty list of pairs");
  for (const auto &q : qubits) {
    reject_unknown_fields(q, {"target", "ancilla"}, "qubits entry");
    QubitPair p;
    p.target = require(q, "target").as<int>();
    p.ancilla = require(q, "ancilla").as<int>();
    if (p.target == p.ancilla)
      throw SchemaError("qubits", "target and ancilla must differ");
    c.qubits.push_back(p);
  }

  const YAML::Node angles = require(n, "angles");
  reject_unknown_fields(angles, {"start", "stop", "num_steps"}, "angles");
  c.angles.start_expr = require(angles, "start").as<std::string>();
  c.angles.stop_expr = require(angles, "stop").as<std::string>();
  c.angles.num_steps = require(angles, "num_steps").as<int>();
  if (c.angles.num_steps < 2)
    throw SchemaError("num_steps", "must be at least 2");
  if (!(c.angles.start() <= c.angles.stop()))
    throw SchemaError("angles", "start must not exceed stop");

  c.delta = require(n, "delta").as<double>();
  if (!(c.delta >= 0.0 && c.delta <= 1.0))
    throw SchemaError("delta", "must lie in [0, 1]");

  const std::string gs = require(n, "gateset").as<std::string>();
  if (gs == "ibmq")
    c.gateset = GateSet::ibmq;
  else if (gs == "generic")
    c.gateset = GateSet::generic;
  else
    throw SchemaError("gateset", "expected 'ibmq' or 'generic'");

  const std::string method = require(n, "method").as<std::string>();
  if (method == "postselection")
    c.method = SchemeMethod::postselection;
  else if (method == "direct_sum")
    c.method = SchemeMethod::direct_sum;
  else
    throw SchemaError("method", "expected 'postselection' or 'direct_sum'");

  const long long shots = require(n, "num_shots").as<long long>();
  if (shots < 1) throw SchemaError("num_shots", "must be at least 1");
  c.num_shots = static_cast<std::uint64_t>(shots);
  return c;
}

MitigationInfo mitigation_from_node(const YAML::Node &n, const char *context) {
  reject_unknown_fields(n, {"prob_meas0_prep1", "prob_meas1_prep0"}, context);
  MitigationInfo m;
  m.prob_meas0_prep1 = require(n, "prob_meas0_prep1").as<double>();
  m.prob_meas1_prep0 = require(n, "prob_meas1_prep0").as<double>();
  if (!(m.prob_meas0_prep1 >= 0.0 && m.prob_meas0_prep1 <= 1.0 &&
        m.prob_meas1_prep0 >= 0.0 && m.prob_meas1_prep0 <= 1.0))
    throw SchemaError(context, "probabilities must lie in [0, 1]");
  return m;
}

NoiseConfig noise_from_node(const YAML::Node &n) {
  reject_unknown_fields(n, {"target", "ancilla"}, "noise");
  NoiseConfig nc;
  nc.target = mitigation_from_node(require(n, "target"), "noise.target");
  nc.ancilla = mitigation_from_node(require(n, "ancilla"), "noise.ancilla");
  return nc;
}

BackendConfig backend_from_node(const YAML::Node &n) {
  if (!n.IsMap()) throw SchemaError("(root)", "backend must be a mapping");
  reject_unknown_fields(
      n, {"name", "asynchronous", "kind", "seed", "noise", "provider"},
      "backend");
  BackendConfig c;
  c.name = require(n, "name").as<std::string>();
  c.asynchronous = require(n, "asynchronous").as<bool>();
  c.kind = require(n, "kind").as<std::string>();
  if (c.kind != "local_simulator")
    throw SchemaError("kind", "only 'local_simulator' is supported");
  if (const YAML::Node s = n["seed"]) c.seed = s.as<std::uint64_t>();
  if (const YAML::Node nn = n["noise"]) c.noise = noise_from_node(nn);
  if (const YAML::Node p = n["provider"]) {
    if (!p.IsMap()) throw SchemaError("provider", "expected a mapping");
    for (const auto &kv : p)
      c.provider.emplace_back(kv.first.as<std::string>(),
                              kv.second.as<std::string>());
  }
  return c;
}

void emit_mitigation(YAML::Emitter &e, const MitigationInfo &m) {
  e << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "prob_meas0_prep1" << YAML::Value
    << fmt("%.17g", m.prob_meas0_prep1);
  e << YAML::Key << "prob_meas1_prep0" << YAML::Value
    << fmt("%.17g", m.prob_meas1_prep0);
  e << YAML::EndMap;
}

void emit_experiment(YAML::Emitter &e, const ExperimentConfig &c) {
  e << YAML::BeginMap;
  e << YAML::Key << "type" << YAML::Value << c.type;
  e << YAML::Key << "qubits" << YAML::Value << YAML::BeginSeq;
  for (const auto &q : c.qubits) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "target" << YAML::Value << q.target;
    e << YAML::Key << "ancilla" << YAML::Value << q.ancilla;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::Key << "angles" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "start" << YAML::Value << c.angles.start_expr;
  e << YAML::Key << "stop" << YAML::Value << c.angles.stop_expr;
  e << YAML::Key << "num_steps" << YAML::Value << c.angles.num_steps;
  e << YAML::EndMap;
  e << YAML::Key << "delta" << YAML::Value << fmt("%.17g", c.delta);
  e << YAML::Key << "gateset" << YAML::Value
    << (c.gateset == GateSet::ibmq ? "ibmq" : "generic");
  e << YAML::Key << "method" << YAML::Value
    << (c.method == SchemeMethod::postselection ? "postselection"
                                                : "direct_sum");
  e << YAML::Key << "num_shots" << YAML::Value << c.num_shots;
  e << YAML::EndMap;
}

void emit_backend(YAML::Emitter &e, const BackendConfig &c) {
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << c.name;
  e << YAML::Key << "asynchronous" << YAML::Value << c.asynchronous;
  e << YAML::Key << "kind" << YAML::Value << c.kind;
  if (c.seed) e << YAML::Key << "seed" << YAML::Value << *c.seed;
  if (c.noise) {
    e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "target" << YAML::Value;
    emit_mitigation(e, c.noise->target);
    e << YAML::Key << "ancilla" << YAML::Value;
    emit_mitigation(e, c.noise->ancilla);
    e << YAML::EndMap;
  }
  if (!c.provider.empty()) {
    e << YAML::Key << "provider" << YAML::Value << YAML::Flow
      << YAML::BeginMap;
    for (const auto &[k, v] : c.provider) e << YAML::Key << k << YAML::Value << v;
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
}

void emit_metadata(YAML::Emitter &e, const ExperimentConfig &exp,
                   const BackendConfig &backend) {
  e << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "experiments" << YAML::Value;
  emit_experiment(e, exp);
  e << YAML::Key << "backend_description" << YAML::Value;
  emit_backend(e, backend);
  e << YAML::EndMap;
}

void emit_histogram(YAML::Emitter &e, const Histogram &h) {
  e << YAML::Flow << YAML::BeginMap;
  for (const auto &[k, v] : h.counts) e << YAML::Key << k << YAML::Value << v;
  e << YAML::EndMap;
}

void emit_quasi(YAML::Emitter &e, const QuasiHistogram &h) {
  e << YAML::Flow << YAML::BeginMap;
  for (const auto &[k, v] : h) e << YAML::Key << k << YAML::Value << fmt("%.17g", v);
  e << YAML::EndMap;
}

Histogram histogram_from_node(const YAML::Node &n) {
  if (!n.IsMap()) throw MalformedResults("histogram must be a mapping");
  Histogram h;
  for (const auto &kv : n)
    h.counts[kv.first.as<std::string>()] = kv.second.as<std::uint64_t>();
  return h;
}

QuasiHistogram quasi_from_node(const YAML::Node &n) {
  if (!n.IsMap())
    throw MalformedResults("mitigated_histogram must be a mapping");
  QuasiHistogram h;
  for (const auto &kv : n)
    h[kv.first.as<std::string>()] = kv.second.as<double>();
  return h;
}

std::pair<ExperimentConfig, BackendConfig> metadata_from_node(
    const YAML::Node &root) {
  const YAML::Node meta = root["metadata"];
  if (!meta) throw MalformedResults("missing 'metadata'");
  const YAML::Node exp = meta["experiments"];
  const YAML::Node be = meta["backend_description"];
  if (!exp || !be)
    throw MalformedResults(
        "metadata must carry 'experiments' and 'backend_description'");
  return {experiment_from_node(exp), backend_from_node(be)};
}

}  // namespace

ExperimentConfig parse_experiment_yaml(const std::string &text) {
  YAML::Node n;
  try {
    n = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw SchemaError("(root)", std::string("invalid YAML: ") + e.what());
  }
  return experiment_from_node(n);
}

BackendConfig parse_backend_yaml(const std::string &text) {
  YAML::Node n;
  try {
    n = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw SchemaError("(root)", std::string("invalid YAML: ") + e.what());
  }
  return backend_from_node(n);
}

namespace {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

ExperimentConfig load_experiment(const std::filesystem::path &path) {
  return parse_experiment_yaml(read_file(path));
}

BackendConfig load_backend(const std::filesystem::path &path) {
  return parse_backend_yaml(read_file(path));
}

std::string experiment_to_yaml(const ExperimentConfig &c) {
  YAML::Emitter e;
  emit_experiment(e, c);
  return std::string(e.c_str()) + "\n";
}

std::string backend_to_yaml(const BackendConfig &c) {
  YAML::Emitter e;
  emit_backend(e, c);
  return std::string(e.c_str()) + "\n";
}

std::string result_file_to_yaml(const ResolvedResultFile &f) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_metadata(e, f.experiment, f.backend);
  e << YAML::Key << "data" << YAML::Value << YAML::BeginSeq;
  for (const auto &entry : f.data) {
    e << YAML::BeginMap;
    e << YAML::Key << "target" << YAML::Value << entry.target;
    e << YAML::Key << "ancilla" << YAML::Value << entry.ancilla;
    e << YAML::Key << "phi" << YAML::Value << fmt("%.17g", entry.phi);
    e << YAML::Key << "delta" << YAML::Value << fmt("%.17g", entry.delta);
    e << YAML::Key << "results_per_circuit" << YAML::Value << YAML::BeginSeq;
    for (const auto &r : entry.results_per_circuit) {
      e << YAML::BeginMap;
      e << YAML::Key << "name" << YAML::Value << r.name;
      e << YAML::Key << "histogram" << YAML::Value;
      emit_histogram(e, r.histogram);
      if (r.mitigation_info) {
        e << YAML::Key << "mitigation_info" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "target" << YAML::Value;
        emit_mitigation(e, r.mitigation_info->target);
        e << YAML::Key << "ancilla" << YAML::Value;
        emit_mitigation(e, r.mitigation_info->ancilla);
        e << YAML::EndMap;
      }
      if (r.mitigated_histogram) {
        e << YAML::Key << "mitigated_histogram" << YAML::Value;
        emit_quasi(e, *r.mitigated_histogram);
      }
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string result_file_to_yaml(const AsyncResultFile &f) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_metadata(e, f.experiment, f.backend);
  e << YAML::Key << "data" << YAML::Value << YAML::BeginSeq;
  for (const auto &entry : f.data) {
    e << YAML::BeginMap;
    e << YAML::Key << "job_id" << YAML::Value << entry.job_id;
    e << YAML::Key << "keys" << YAML::Value << YAML::BeginSeq;
    for (const auto &k : entry.keys) {
      e << YAML::Flow << YAML::BeginSeq;
      e << k.target << k.ancilla << k.circuit_name << fmt("%.17g", k.phi)
        << fmt("%.17g", k.delta);
      e << YAML::EndSeq;
    }
    e << YAML::EndSeq;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

namespace {

JobKey key_from_node(const YAML::Node &n) {
  if (!n.IsSequence() || n.size() != 5)
    throw MalformedResults("key tuple must have 5 elements");
  JobKey k;
  k.target = n[0].as<int>();
  k.ancilla = n[1].as<int>();
  k.circuit_name = n[2].as<std::string>();
  k.phi = n[3].as<double>();
  k.delta = n[4].as<double>();
  return k;
}

}  // namespace

ResolvedResultFile parse_resolved_yaml(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw MalformedResults(std::string("invalid YAML: ") + e.what());
  }
  ResolvedResultFile f;
  std::tie(f.experiment, f.backend) = metadata_from_node(root);
  const YAML::Node data = root["data"];
  if (data && !data.IsNull()) {
    if (!data.IsSequence()) throw MalformedResults("'data' must be a list");
    for (const auto &dn : data) {
      ResolvedEntry entry;
      entry.target = require(dn, "target").as<int>();
      entry.ancilla = require(dn, "ancilla").as<int>();
      entry.phi = require(dn, "phi").as<double>();
      entry.delta = require(dn, "delta").as<double>();
      const YAML::Node rpc = require(dn, "results_per_circuit");
      for (const auto &rn : rpc) {
        CircuitResult r;
        r.name = require(rn, "name").as<std::string>();
        r.histogram = histogram_from_node(require(rn, "histogram"));
        if (const YAML::Node mi = rn["mitigation_info"])
          r.mitigation_info = noise_from_node(mi);
        if (const YAML::Node mh = rn["mitigated_histogram"])
          r.mitigated_histogram = quasi_from_node(mh);
        entry.results_per_circuit.push_back(std::move(r));
      }
      f.data.push_back(std::move(entry));
    }
  }
  return f;
}

AsyncResultFile parse_async_yaml(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw MalformedResults(std::string("invalid YAML: ") + e.what());
  }
  AsyncResultFile f;
  std::tie(f.experiment, f.backend) = metadata_from_node(root);
  const YAML::Node data = root["data"];
  std::set<std::string> seen;
  if (data && !data.IsNull()) {
    if (!data.IsSequence()) throw MalformedResults("'data' must be a list");
    for (const auto &dn : data) {
      AsyncJobEntry entry;
      entry.job_id = require(dn, "job_id").as<std::string>();
      if (!seen.insert(entry.job_id).second)
        throw MalformedResults("duplicate job_id " + entry.job_id);
      for (const auto &kn : require(dn, "keys"))
        entry.keys.push_back(key_from_node(kn));
      f.data.push_back(std::move(entry));
    }
  }
  return f;
}

ResolvedResultFile load_resolved(const std::filesystem::path &path) {
  return parse_resolved_yaml(read_file(path));
}

AsyncResultFile load_async(const std::filesystem::path &path) {
  return parse_async_yaml(read_file(path));
}

bool operator==(const QubitPair &a, const QubitPair &b) {
  return a.target == b.target && a.ancilla == b.ancilla;
}

bool operator==(const AngleRange &a, const AngleRange &b) {
  return a.start_expr == b.start_expr && a.stop_expr == b.stop_expr &&
         a.num_steps == b.num_steps;
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
  return a.type == b.type && a.qubits == b.qubits && a.angles == b.angles &&
         a.delta == b.delta && a.gateset == b.gateset && a.method == b.method &&
         a.num_shots == b.num_shots;
}

namespace {

bool mitigation_equal(const MitigationInfo &a, const MitigationInfo &b) {
  return a.prob_meas0_prep1 == b.prob_meas0_prep1 &&
         a.prob_meas1_prep0 == b.prob_meas1_prep0;
}

bool noise_equal(const std::optional<NoiseConfig> &a,
                 const std::optional<NoiseConfig> &b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return mitigation_equal(a->target, b->target) &&
         mitigation_equal(a->ancilla, b->ancilla);
}

}  // namespace

bool operator==(const BackendConfig &a, const BackendConfig &b) {
  return a.name == b.name && a.asynchronous == b.asynchronous &&
         a.kind == b.kind && a.seed == b.seed && noise_equal(a.noise, b.noise) &&
         a.provider == b.provider;
}

// ---------------------------------------------------------------------------
// Job store.
// ---------------------------------------------------------------------------

JobStore::JobStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec)
    throw JobStoreError("cannot create job store at " + dir_.string() + ": " +
                        ec.message());
}

std::string JobStore::submit(const std::vector<StoredResult> &results,
                             std::uint64_t id_seed) {
  std::mt19937_64 gen(id_seed);
  std::string id;
  do {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(gen()));
    id = buf;
  } while (std::filesystem::exists(dir_ / (id + ".yml")));

  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "job_id" << YAML::Value << id;
  e << YAML::Key << "status" << YAML::Value << "DONE";
  e << YAML::Key << "results" << YAML::Value << YAML::BeginSeq;
  for (const auto &r : results) {
    e << YAML::BeginMap;
    e << YAML::Key << "key" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    e << r.key.target << r.key.ancilla << r.key.circuit_name
      << fmt("%.17g", r.key.phi) << fmt("%.17g", r.key.delta);
    e << YAML::EndSeq;
    e << YAML::Key << "histogram" << YAML::Value;
    emit_histogram(e, r.histogram);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  write_file(dir_ / (id + ".yml"), std::string(e.c_str()) + "\n");
  return id;
}

std::string JobStore::status(const std::string &job_id) const {
  const auto path = dir_ / (job_id + ".yml");
  if (!std::filesystem::exists(path))
    throw UnknownJob("unknown job " + job_id);
  const YAML::Node n = YAML::Load(read_file(path));
  const YAML::Node s = n["status"];
  if (!s) throw JobStoreError("job file lacks 'status': " + path.string());
  return s.as<std::string>();
}

std::vector<JobStore::StoredResult> JobStore::fetch(
    const std::string &job_id) const {
  const auto path = dir_ / (job_id + ".yml");
  if (!std::filesystem::exists(path))
    throw UnknownJob("unknown job " + job_id);
  const YAML::Node n = YAML::Load(read_file(path));
  std::vector<StoredResult> out;
  for (const auto &rn : n["results"]) {
    StoredResult r;
    r.key = key_from_node(rn["key"]);
    r.histogram = histogram_from_node(rn["histogram"]);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark execution.
// ---------------------------------------------------------------------------

namespace {

std::string circuit_key(int target, int ancilla, const std::string &name,
                        double phi, double delta) {
  return std::to_string(target) + "," + std::to_string(ancilla) + "," + name +
         "," + fmt("%.17g", phi) + "," + fmt("%.17g", delta);
}

ReadoutError readout_from_mitigation(const MitigationInfo &m) {
  ReadoutError r;
  r.rows = {{{1.0 - m.prob_meas1_prep0, m.prob_meas0_prep1},
             {m.prob_meas1_prep0, 1.0 - m.prob_meas0_prep1}}};
  return r;
}

NoiseModel noise_model_from(const NoiseConfig &nc) {
  NoiseModel nm;
  nm.target = readout_from_mitigation(nc.target);
  nm.ancilla = readout_from_mitigation(nc.ancilla);
  return nm;
}

/// Circuits for one (pair, phi), in the fixed name order the result files
/// use: "u" for direct_sum, {"u_v0", "u_v1"} for postselection.
std::vector<std::pair<std::string, Circuit>> build_point_circuits(
    const ExperimentConfig &exp, double phi) {
  const FourierAngle angle(phi);
  const Significance delta(exp.delta);
  const auto [v0, v1] = optimal_final_unitaries(angle, delta);
  const Fragment1q u_dag = fourier_u_dag(angle.phi());

  std::vector<std::pair<std::string, Circuit>> out;
  if (exp.method == SchemeMethod::direct_sum) {
    Circuit block = direct_sum_block(v0, v1, exp.gateset);
    out.emplace_back(
        "u", assemble_direct_sum(bell_prep(), u_dag, block, exp.gateset));
  } else {
    const Fragment1q v0_dag = {Gate1q{Gate1q::Kind::Raw, 0.0, dagger(v0)}};
    const Fragment1q v1_dag = {Gate1q{Gate1q::Kind::Raw, 0.0, dagger(v1)}};
    auto circuits = assemble_postselection(bell_prep(), u_dag, v0_dag, v1_dag,
                                           exp.gateset);
    out.emplace_back("u_v0", std::move(circuits.at("u_v0")));
    out.emplace_back("u_v1", std::move(circuits.at("u_v1")));
  }
  return out;
}

std::uint64_t effective_seed(const BackendConfig &backend) {
  if (backend.seed) return *backend.seed;
  return std::random_device{}();
}

}  // namespace

BenchmarkResult run_benchmark(const ExperimentConfig &exp,
                              const BackendConfig &backend, JobStore &store) {
  const std::uint64_t seed = effective_seed(backend);
  NoiseModel nm;
  const NoiseModel *noise = nullptr;
  if (backend.noise) {
    nm = noise_model_from(*backend.noise);
    noise = &nm;
  }

  const std::vector<double> phis = angle_grid(exp.angles);

  std::vector<std::pair<std::string, Circuit>> batch;
  for (const auto &pair : exp.qubits)
    for (double phi : phis)
      for (auto &[name, circuit] : build_point_circuits(exp, phi))
        batch.emplace_back(
            circuit_key(pair.target, pair.ancilla, name, phi, exp.delta),
            std::move(circuit));
  const std::map<std::string, Histogram> histograms =
      run_batch(batch, exp.num_shots, Seed{seed}, noise);

  if (!backend.asynchronous) {
    ResolvedResultFile f{exp, backend, {}};
    for (const auto &pair : exp.qubits) {
      for (double phi : phis) {
        ResolvedEntry entry{pair.target, pair.ancilla, phi, exp.delta, {}};
        const std::vector<std::string> names =
            exp.method == SchemeMethod::direct_sum
                ? std::vector<std::string>{"u"}
                : std::vector<std::string>{"u_v0", "u_v1"};
        for (const auto &name : names) {
          CircuitResult r;
          r.name = name;
          r.histogram = histograms.at(
              circuit_key(pair.target, pair.ancilla, name, phi, exp.delta));
          if (backend.noise) {
            r.mitigation_info = *backend.noise;
            r.mitigated_histogram = mitigate_histogram(
                r.histogram, backend.noise->target, backend.noise->ancilla);
          }
          entry.results_per_circuit.push_back(std::move(r));
        }
        f.data.push_back(std::move(entry));
      }
    }
    return f;
  }

  AsyncResultFile f{exp, backend, {}};
  for (const auto &pair : exp.qubits) {
    AsyncJobEntry entry;
    std::vector<JobStore::StoredResult> results;
    const std::vector<std::string> names =
        exp.method == SchemeMethod::direct_sum
            ? std::vector<std::string>{"u"}
            : std::vector<std::string>{"u_v0", "u_v1"};
    for (double phi : phis) {
      for (const auto &name : names) {
        JobKey key{pair.target, pair.ancilla, name, phi, exp.delta};
        entry.keys.push_back(key);
        results.push_back(JobStore::StoredResult{
            key, histograms.at(circuit_key(pair.target, pair.ancilla, name,
                                           phi, exp.delta))});
      }
    }
    const std::string job_seed_key = "job:" + std::to_string(pair.target) +
                                     "," + std::to_string(pair.ancilla);
    entry.job_id =
        store.submit(results, derive_substream_seed(Seed{seed}, job_seed_key));
    f.data.push_back(std::move(entry));
  }
  return f;
}

std::map<std::string, std::size_t> job_status(const AsyncResultFile &f,
                                              const JobStore &store) {
  std::map<std::string, std::size_t> out;
  for (const auto &entry : f.data) ++out[store.status(entry.job_id)];
  return out;
}

ResolvedResultFile resolve(const AsyncResultFile &f, const JobStore &store) {
  std::vector<std::string> pending;
  for (const auto &entry : f.data)
    if (store.status(entry.job_id) != "DONE") pending.push_back(entry.job_id);
  if (!pending.empty()) throw JobsPending(pending);

  std::map<std::string, Histogram> histograms;
  for (const auto &entry : f.data)
    for (auto &r : store.fetch(entry.job_id))
      histograms[circuit_key(r.key.target, r.key.ancilla, r.key.circuit_name,
                             r.key.phi, r.key.delta)] = std::move(r.histogram);

  const ExperimentConfig &exp = f.experiment;
  ResolvedResultFile out{exp, f.backend, {}};
  for (const auto &entry : f.data) {
    // Preserve the key order, grouping consecutive keys of one (pair, phi).
    ResolvedEntry *current = nullptr;
    for (const auto &k : entry.keys) {
      if (!current || current->target != k.target ||
          current->ancilla != k.ancilla || current->phi != k.phi) {
        out.data.push_back(
            ResolvedEntry{k.target, k.ancilla, k.phi, k.delta, {}});
        current = &out.data.back();
      }
      auto it = histograms.find(circuit_key(k.target, k.ancilla,
                                            k.circuit_name, k.phi, k.delta));
      if (it == histograms.end())
        throw MalformedResults("job store lacks histogram for key of job " +
                               entry.job_id);
      CircuitResult r;
      r.name = k.circuit_name;
      r.histogram = it->second;
      if (f.backend.noise) {
        r.mitigation_info = *f.backend.noise;
        r.mitigated_histogram = mitigate_histogram(
            r.histogram, f.backend.noise->target, f.backend.noise->ancilla);
      }
      current->results_per_circuit.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tabulation and plotting.
// ---------------------------------------------------------------------------

std::vector<TabulatedRow> tabulate_rows(const ResolvedResultFile &f) {
  const SchemeMethod method = f.experiment.method;
  std::vector<TabulatedRow> rows;
  for (const auto &entry : f.data) {
    TabulatedRow row;
    row.target = entry.target;
    row.ancilla = entry.ancilla;
    row.phi = entry.phi;
    row.delta = entry.delta;
    row.ideal_prob = ideal_p2(FourierAngle(entry.phi), Significance(entry.delta));

    auto find = [&](const std::string &name) -> const CircuitResult * {
      for (const auto &r : entry.results_per_circuit)
        if (r.name == name) return &r;
      return nullptr;
    };

    if (method == SchemeMethod::direct_sum) {
      const CircuitResult *u = find("u");
      if (!u) throw MalformedResults("direct_sum entry lacks circuit 'u'");
      row.cert_prob = compute_p2_direct_sum(u->histogram);
      if (u->mitigated_histogram)
        row.mitigated_cert_prob =
            compute_mitigated_p2(method, {*u->mitigated_histogram});
    } else {
      const CircuitResult *v0 = find("u_v0");
      const CircuitResult *v1 = find("u_v1");
      if (!v0 || !v1)
        throw MalformedResults(
            "postselection entry lacks circuits 'u_v0'/'u_v1'");
      row.cert_prob = compute_p2_postselection(v0->histogram, v1->histogram);
      if (v0->mitigated_histogram && v1->mitigated_histogram)
        row.mitigated_cert_prob = compute_mitigated_p2(
            method, {*v0->mitigated_histogram, *v1->mitigated_histogram});
    }
    rows.push_back(row);
  }
  return rows;
}

std::size_t tabulate(const ResolvedResultFile &f,
                     const std::filesystem::path &csv_path) {
  const std::vector<TabulatedRow> rows = tabulate_rows(f);
  std::string csv = std::string(kCsvHeader) + "\n";
  for (const auto &r : rows) {
    csv += std::to_string(r.target) + "," + std::to_string(r.ancilla) + "," +
           fmt("%.17g", r.phi) + "," + fmt("%.6g", r.delta) + "," +
           fmt("%.6g", r.ideal_prob) + "," + fmt("%.6g", r.cert_prob) + ",";
    if (r.mitigated_cert_prob) csv += fmt("%.6g", *r.mitigated_cert_prob);
    csv += "\n";
  }
  write_file(csv_path, csv);
  return rows.size();
}

namespace {

struct CsvRow {
  double phi, ideal, cert;
  std::optional<double> mitigated;
};

double parse_csv_number(const std::string &cell) {
  char *end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || cell.empty())
    throw MalformedCsv("non-numeric cell: '" + cell + "'");
  return v;
}

std::vector<CsvRow> read_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsv("empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw MalformedCsv("unexpected header: " + line);

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 7)
      throw MalformedCsv("expected 7 cells, got " +
                         std::to_string(cells.size()));
    CsvRow r;
    parse_csv_number(cells[0]);
    parse_csv_number(cells[1]);
    r.phi = parse_csv_number(cells[2]);
    parse_csv_number(cells[3]);
    r.ideal = parse_csv_number(cells[4]);
    r.cert = parse_csv_number(cells[5]);
    if (!cells[6].empty()) r.mitigated = parse_csv_number(cells[6]);
    rows.push_back(r);
  }
  return rows;
}

struct Panel {
  double x0, y0, w, h;     // pixel frame
  double phi_min, phi_max; // data ranges
  double v_min, v_max;

  double px(double phi) const {
    const double span = phi_max > phi_min ? phi_max - phi_min : 1.0;
    return x0 + (phi - phi_min) / span * w;
  }
  double py(double v) const {
    const double span = v_max > v_min ? v_max - v_min : 1.0;
    return y0 + h - (v - v_min) / span * h;
  }
};

void append_polyline(std::string &svg, const Panel &p,
                     const std::vector<std::pair<double, double>> &pts,
                     const char *color) {
  if (pts.empty()) return;
  svg += "  <polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.5\" points=\"";
  for (const auto &[phi, v] : pts)
    svg += fmt("%.2f", p.px(phi)) + "," + fmt("%.2f", p.py(v)) + " ";
  svg += "\"/>\n";
}

void append_axes(std::string &svg, const Panel &p, const char *title) {
  svg += "  <rect x=\"" + fmt("%.1f", p.x0) + "\" y=\"" + fmt("%.1f", p.y0) +
         "\" width=\"" + fmt("%.1f", p.w) + "\" height=\"" + fmt("%.1f", p.h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "  <text x=\"" + fmt("%.1f", p.x0) + "\" y=\"" +
         fmt("%.1f", p.y0 - 8) + "\" font-size=\"14\">" + title + "</text>\n";
}

}  // namespace

void plot(const std::filesystem::path &csv_path,
          const std::filesystem::path &svg_path) {
  const std::vector<CsvRow> rows = read_csv(csv_path);

  std::vector<std::pair<double, double>> ideal, cert, mitigated;
  std::vector<std::pair<double, double>> cert_dev, mit_dev;
  for (const auto &r : rows) {
    ideal.emplace_back(r.phi, r.ideal);
    cert.emplace_back(r.phi, r.cert);
    cert_dev.emplace_back(r.phi, std::abs(r.cert - r.ideal));
    if (r.mitigated) {
      mitigated.emplace_back(r.phi, *r.mitigated);
      mit_dev.emplace_back(r.phi, std::abs(*r.mitigated - r.ideal));
    }
  }

  double phi_min = 0, phi_max = 2 * kPi, dev_max = 1e-3;
  if (!rows.empty()) {
    phi_min = phi_max = rows.front().phi;
    for (const auto &r : rows) {
      phi_min = std::min(phi_min, r.phi);
      phi_max = std::max(phi_max, r.phi);
    }
    for (const auto &[phi, v] : cert_dev) dev_max = std::max(dev_max, v);
    for (const auto &[phi, v] : mit_dev) dev_max = std::max(dev_max, v);
  }

  const Panel top{60, 40, 680, 220, phi_min, phi_max, 0.0, 1.0};
  const Panel bottom{60, 330, 680, 220, phi_min, phi_max, 0.0, dev_max};

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
      "height=\"600\" viewBox=\"0 0 800 600\">\n";
  svg += "  <rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  append_axes(svg, top, "type II error probability vs phi");
  append_polyline(svg, top, ideal, "black");
  append_polyline(svg, top, cert, "#1f77b4");
  append_polyline(svg, top, mitigated, "#2ca02c");
  append_axes(svg, bottom, "absolute deviation from ideal vs phi");
  append_polyline(svg, bottom, cert_dev, "#1f77b4");
  append_polyline(svg, bottom, mit_dev, "#2ca02c");
  svg +=
      "  <text x=\"60\" y=\"585\" font-size=\"12\">black: ideal, blue: "
      "certified, green: mitigated</text>\n";
  svg += "</svg>\n";
  write_file(svg_path, svg);
}

// ---------------------------------------------------------------------------
// CLI.
// ---------------------------------------------------------------------------

namespace {

int run_cli(const std::vector<std::string> &argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"qubit measurement certification benchmark harness", "qbench"};
  app.require_subcommand(1);

  CLI::App *cert = app.add_subcommand(
      "cert-fourier", "Fourier-family measurement certification");
  cert->require_subcommand(1);

  std::string exp_path, backend_path, output;
  std::string in_path, out_path;
  std::string jobs_dir = JobStore::kDefaultDir;

  CLI::App *bench =
      cert->add_subcommand("benchmark", "run the configured experiment");
  bench->add_option("experiment", exp_path, "experiment YAML file")->required();
  bench->add_option("backend", backend_path, "backend YAML file")->required();
  bench->add_option("--output", output, "result file (default: stdout)");
  bench->add_option("--jobs-dir", jobs_dir, "job store directory");

  CLI::App *status =
      cert->add_subcommand("status", "summarize asynchronous job statuses");
  status->add_option("results", in_path, "async result YAML file")->required();
  status->add_option("--jobs-dir", jobs_dir, "job store directory");

  CLI::App *res =
      cert->add_subcommand("resolve", "resolve asynchronous results");
  res->add_option("results", in_path, "async result YAML file")->required();
  res->add_option("resolved", out_path, "resolved output YAML file")
      ->required();
  res->add_option("--jobs-dir", jobs_dir, "job store directory");

  CLI::App *tab = cert->add_subcommand("tabulate", "emit the CSV summary");
  tab->add_option("resolved", in_path, "resolved result YAML file")->required();
  tab->add_option("csv", out_path, "output CSV file")->required();

  CLI::App *pl = cert->add_subcommand("plot", "render the CSV as an SVG");
  pl->add_option("csv", in_path, "input CSV file")->required();
  pl->add_option("svg", out_path, "output SVG file")->required();

  std::vector<const char *> cargv;
  cargv.push_back("qbench");
  for (const auto &a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()),
              const_cast<char **>(cargv.data()));
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  if (bench->parsed()) {
    const ExperimentConfig exp = load_experiment(exp_path);
    const BackendConfig backend = load_backend(backend_path);
    JobStore store(jobs_dir);
    const BenchmarkResult result = run_benchmark(exp, backend, store);
    const std::string yaml = std::visit(
        [](const auto &f) { return result_file_to_yaml(f); }, result);
    if (output.empty())
      out << yaml;
    else
      write_file(output, yaml);
    return 0;
  }
  if (status->parsed()) {
    const AsyncResultFile f = load_async(in_path);
    const JobStore store(jobs_dir);
    for (const auto &[state, count] : job_status(f, store))
      out << state << ": " << count << "\n";
    return 0;
  }
  if (res->parsed()) {
    const AsyncResultFile f = load_async(in_path);
    const JobStore store(jobs_dir);
    write_file(out_path, result_file_to_yaml(resolve(f, store)));
    return 0;
  }
  if (tab->parsed()) {
    const std::size_t n = tabulate(load_resolved(in_path), out_path);
    out << n << " rows written to " << out_path << "\n";
    return 0;
  }
  if (pl->parsed()) {
    plot(in_path, out_path);
    return 0;
  }
  err << "no command given\n";
  return 1;
}

}  // namespace

int cli_dispatch(const std::vector<std::string> &argv, std::ostream &out,
                 std::ostream &err) {
  if (!argv.empty() && argv[0] != "cert-fourier" && argv[0][0] != '-') {
    err << "unsupported benchmark type: " << argv[0] << "\n";
    return 1;
  }
  try {
    return run_cli(argv, out, err);
  } catch (const SchemaError &e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qbench
