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

/**
 * @file
 * The qbench command-line workflow: YAML experiment/backend configuration,
 * angle-expression parsing, synchronous and asynchronous execution backed
 * by a directory job store, result resolution, CSV tabulation and SVG
 * plotting.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qbench/schemes.hpp"
#include "qbench/theory.hpp"

namespace qbench {

struct ParseError : std::runtime_error {
  ParseError(const std::string &msg, std::size_t offset);
  std::size_t offset;
};
struct DivisionByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  SchemaError(const std::string &field, const std::string &msg);
  std::string field;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct JobStoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownJob : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct JobsPending : std::runtime_error {
  JobsPending(const std::vector<std::string> &ids);
  std::vector<std::string> pending_ids;
};
struct MalformedResults : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedCsv : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Arithmetic over + - * / ( ) with a 'pi' literal and unary minus.
/// Throws ParseError (with byte offset) or DivisionByZero.
double parse_angle_expr(const std::string &text);

struct AngleRange {
  std::string start_expr;
  std::string stop_expr;
  int num_steps = 2;

  double start() const { return parse_angle_expr(start_expr); }
  double stop() const { return parse_angle_expr(stop_expr); }
};

/// Uniform grid with both endpoints included (endpoints are bitwise the
/// evaluated start/stop).
std::vector<double> angle_grid(const AngleRange &r);

struct QubitPair {
  int target = 0;
  int ancilla = 1;
};

struct ExperimentConfig {
  std::string type;  // always "certification-fourier"
  std::vector<QubitPair> qubits;
  AngleRange angles;
  double delta = 0.0;
  GateSet gateset = GateSet::ibmq;
  SchemeMethod method = SchemeMethod::direct_sum;
  std::uint64_t num_shots = 1;
};

/// Per-qubit readout noise for the local simulator, in calibration form.
struct NoiseConfig {
  MitigationInfo target;
  MitigationInfo ancilla;
};

struct BackendConfig {
  std::string name;
  bool asynchronous = false;
  std::string kind;  // only "local_simulator" is supported
  std::optional<std::uint64_t> seed;
  std::optional<NoiseConfig> noise;
  /// Opaque provider block, preserved verbatim on round trips.
  std::vector<std::pair<std::string, std::string>> provider;
};

struct CircuitResult {
  std::string name;  // "u", "u_v0" or "u_v1"
  Histogram histogram;
  std::optional<NoiseConfig> mitigation_info;
  std::optional<QuasiHistogram> mitigated_histogram;
};

struct ResolvedEntry {
  int target = 0;
  int ancilla = 1;
  double phi = 0.0;
  double delta = 0.0;
  std::vector<CircuitResult> results_per_circuit;
};

struct ResolvedResultFile {
  ExperimentConfig experiment;
  BackendConfig backend;
  std::vector<ResolvedEntry> data;
};

/// One key tuple: [target, ancilla, circuit_name, phi, delta].
struct JobKey {
  int target = 0;
  int ancilla = 1;
  std::string circuit_name;
  double phi = 0.0;
  double delta = 0.0;
};

struct AsyncJobEntry {
  std::string job_id;
  std::vector<JobKey> keys;
};

struct AsyncResultFile {
  ExperimentConfig experiment;
  BackendConfig backend;
  std::vector<AsyncJobEntry> data;
};

ExperimentConfig load_experiment(const std::filesystem::path &path);
BackendConfig load_backend(const std::filesystem::path &path);
ExperimentConfig parse_experiment_yaml(const std::string &text);
BackendConfig parse_backend_yaml(const std::string &text);

std::string experiment_to_yaml(const ExperimentConfig &c);
std::string backend_to_yaml(const BackendConfig &c);
std::string result_file_to_yaml(const ResolvedResultFile &f);
std::string result_file_to_yaml(const AsyncResultFile &f);
ResolvedResultFile parse_resolved_yaml(const std::string &text);
AsyncResultFile parse_async_yaml(const std::string &text);
ResolvedResultFile load_resolved(const std::filesystem::path &path);
AsyncResultFile load_async(const std::filesystem::path &path);

bool operator==(const QubitPair &, const QubitPair &);
bool operator==(const AngleRange &, const AngleRange &);
bool operator==(const ExperimentConfig &, const ExperimentConfig &);
bool operator==(const BackendConfig &, const BackendConfig &);

/// Directory-backed job store: one YAML file per job, executed eagerly at
/// submission so status is DONE as soon as the file exists.
class JobStore {
 public:
  explicit JobStore(std::filesystem::path dir);

  struct StoredResult {
    JobKey key;
    Histogram histogram;
  };

  std::string submit(const std::vector<StoredResult> &results,
                     std::uint64_t id_seed);
  std::string status(const std::string &job_id) const;
  std::vector<StoredResult> fetch(const std::string &job_id) const;

  const std::filesystem::path &dir() const { return dir_; }
  static constexpr const char *kDefaultDir = ".qbench_jobs";

 private:
  std::filesystem::path dir_;
};

using BenchmarkResult = std::variant<ResolvedResultFile, AsyncResultFile>;

/// Execute the full benchmark described by the configs on the local
/// simulator. Synchronous backends yield a ResolvedResultFile; asynchronous
/// backends persist jobs into the store and yield an AsyncResultFile.
BenchmarkResult run_benchmark(const ExperimentConfig &exp,
                              const BackendConfig &backend, JobStore &store);

/// Histogram of job statuses, e.g. {"DONE": 1}.
std::map<std::string, std::size_t> job_status(const AsyncResultFile &f,
                                              const JobStore &store);

/// Resolve an async result file into the records a synchronous run with the
/// same seed would have produced. Throws JobsPending if any job is not DONE.
ResolvedResultFile resolve(const AsyncResultFile &f, const JobStore &store);

struct TabulatedRow {
  int target = 0;
  int ancilla = 1;
  double phi = 0.0;
  double delta = 0.0;
  double ideal_prob = 0.0;
  double cert_prob = 0.0;
  std::optional<double> mitigated_cert_prob;
};

std::vector<TabulatedRow> tabulate_rows(const ResolvedResultFile &f);

inline constexpr const char *kCsvHeader =
    "target,ancilla,phi,delta,ideal_prob,cert_prob,mitigated_cert_prob";

/// Write the tabulated CSV; returns the number of data rows.
std::size_t tabulate(const ResolvedResultFile &f,
                     const std::filesystem::path &csv_path);

/// Render the tabulated CSV as a self-contained two-panel SVG
/// (probabilities vs phi; absolute deviations vs phi).
void plot(const std::filesystem::path &csv_path,
          const std::filesystem::path &svg_path);

/// `qbench cert-fourier {benchmark,status,resolve,tabulate,plot} ...`.
/// Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int cli_dispatch(const std::vector<std::string> &argv, std::ostream &out,
                 std::ostream &err);

}  // namespace qbench
