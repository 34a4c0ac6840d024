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

// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are numbered to match the project checklist.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qbench/runner.hpp"

using namespace qbench;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int criterion, bool ok, const std::string &what) {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Fragment1q raw_fragment(const Unitary2 &u) {
  return {Gate1q{Gate1q::Kind::Raw, 0.0, u}};
}

double exact_direct_sum_p2(double phi, double delta) {
  const auto [v0, v1] =
      optimal_final_unitaries(FourierAngle(phi), Significance(delta));
  const Circuit c = assemble_direct_sum(
      bell_prep(), fourier_u_dag(FourierAngle(phi).phi()),
      direct_sum_block(v0, v1));
  const auto d = exact_distribution(c);
  return d.at("00") + d.at("01");
}

double exact_postselection_p2(double phi, double delta,
                              const NoiseModel *noise = nullptr) {
  const auto [v0, v1] =
      optimal_final_unitaries(FourierAngle(phi), Significance(delta));
  const auto circuits = assemble_postselection(
      bell_prep(), fourier_u_dag(FourierAngle(phi).phi()),
      raw_fragment(dagger(v0)), raw_fragment(dagger(v1)));
  const auto d0 = exact_distribution(circuits.at("u_v0"), noise);
  const auto d1 = exact_distribution(circuits.at("u_v1"), noise);
  const double valid = d0.at("00") + d0.at("10") + d1.at("01") + d1.at("11");
  return (d0.at("00") + d1.at("01")) / valid;
}

std::vector<double> seven_cycle_angles() {
  std::vector<double> out;
  for (int k = 0; k < 8; ++k) out.push_back(2 * kPi * k / 7.0);
  return out;
}

void criterion_1() {
  const double expected[] = {0.95, 0.61, 0.187, 0.0, 0.0, 0.187, 0.61, 0.95};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int i = 0;
  for (double phi : seven_cycle_angles()) {
    const double v = ideal_p2(FourierAngle(phi), Significance(0.05));
    worst = std::max(worst, std::abs(v - expected[i++]));
  }
  const double dt = seconds_since(t0);
  std::ostringstream ss;
  ss << "ideal_p2 reproduces the reference column (max dev " << worst
     << ", " << dt * 1e3 << " ms)";
  report(1, worst <= 5e-3 && dt < 1e-3, ss.str());
}

void criterion_2() {
  const QGridConfig cfg{32, 20, 1e-4};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double phi = 2 * kPi * i / 19.0;
    for (int j = 0; j < 10; ++j) {
      const double delta = 0.01 + (0.5 - 0.01) * j / 9.0;
      const double via = p2_via_qrange(fourier_unitary(FourierAngle(phi)),
                                       Significance(delta), cfg);
      worst = std::max(
          worst, std::abs(via - ideal_p2(FourierAngle(phi),
                                         Significance(delta))));
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream ss;
  ss << "q-range optimizer matches ideal_p2 on the 20x10 grid (max dev "
     << worst << ", " << dt << " s)";
  report(2, worst <= 1e-3 && dt < 60.0, ss.str());
}

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (double phi : seven_cycle_angles()) {
    const double ideal = ideal_p2(FourierAngle(phi), Significance(0.05));
    worst = std::max(worst,
                     std::abs(exact_postselection_p2(phi, 0.05) - ideal));
    worst = std::max(worst, std::abs(exact_direct_sum_p2(phi, 0.05) - ideal));
  }
  const double dt = seconds_since(t0);
  std::ostringstream ss;
  ss << "exact scheme distributions equal ideal_p2 (max dev " << worst << ", "
     << dt << " s)";
  report(3, worst <= 1e-9 && dt < 1.0, ss.str());
}

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tmp = std::filesystem::temp_directory_path() / "qbench_accept_4";
  std::filesystem::remove_all(tmp);
  std::filesystem::create_directories(tmp);
  {
    std::ofstream e(tmp / "experiment.yml");
    e << "type: certification-fourier\nqubits:\n  - target: 0\n"
         "    ancilla: 1\nangles:\n  start: 0\n  stop: 2 * pi\n"
         "  num_steps: 8\ndelta: 0.05\ngateset: ibmq\nmethod: direct_sum\n"
         "num_shots: 10000\n";
    std::ofstream b(tmp / "backend.yml");
    b << "name: local\nasynchronous: false\nkind: local_simulator\n"
         "seed: 20260824\n";
  }
  std::ostringstream out, err;
  const int rc_bench = cli_dispatch(
      {"cert-fourier", "benchmark", (tmp / "experiment.yml").string(),
       (tmp / "backend.yml").string(), "--output", (tmp / "r.yml").string(),
       "--jobs-dir", (tmp / "jobs").string()},
      out, err);
  const int rc_tab =
      cli_dispatch({"cert-fourier", "tabulate", (tmp / "r.yml").string(),
                    (tmp / "r.csv").string()},
                   out, err);

  bool ok = rc_bench == 0 && rc_tab == 0;
  double worst_sigma = 0;
  if (ok) {
    const auto rows = tabulate_rows(load_resolved(tmp / "r.yml"));
    ok = rows.size() == 8;
    for (const auto &r : rows) {
      const double p = r.ideal_prob;
      const double sigma = std::sqrt(std::max(p * (1 - p) / 10000.0, 1e-12));
      worst_sigma =
          std::max(worst_sigma, std::abs(r.cert_prob - p) / (3 * sigma));
      if (std::abs(r.cert_prob - p) > 3 * sigma) ok = false;
    }
  }
  const double dt = seconds_since(t0);
  std::filesystem::remove_all(tmp);
  std::ostringstream ss;
  ss << "CLI end-to-end sampled run stays within 3 sigma of ideal (worst "
     << worst_sigma << " of the band, " << dt << " s)";
  report(4, ok && dt < 10.0, ss.str());
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  const double expected = 0.2820550528229661;
  const HadamardComponents hc = hadamard_example_components(0.05);

  const auto circuits = assemble_postselection(hc.state_prep, hc.u_dag,
                                               hc.v0_dag, hc.v1_dag);
  const auto h0 = run(circuits.at("u_v0"), 10000, Seed{11});
  const auto h1 = run(circuits.at("u_v1"), 10000, Seed{12});
  const double post = compute_p2_postselection(h0, h1);

  const Circuit ds = assemble_direct_sum(hc.state_prep, hc.u_dag,
                                         hc.v0_v1_direct_sum_dag);
  const double dsum = compute_p2_direct_sum(run(ds, 10000, Seed{13}));

  const double dt = seconds_since(t0);
  const bool ok =
      std::abs(post - expected) <= 0.0135 && std::abs(dsum - expected) <= 0.0135;
  std::ostringstream ss;
  ss << "sampled Hadamard example lands near the analytic value (post "
     << post << ", direct sum " << dsum << ", " << dt << " s)";
  report(5, ok && dt < 5.0, ss.str());
}

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  ReadoutError e;
  e.rows = {{{0.75, 0.8}, {0.25, 0.2}}};
  NoiseModel nm;
  nm.target = e;
  nm.ancilla = e;

  const HadamardComponents hc = hadamard_example_components(0.05);
  const auto circuits = assemble_postselection(hc.state_prep, hc.u_dag,
                                               hc.v0_dag, hc.v1_dag);
  const auto d0 = exact_distribution(circuits.at("u_v0"), &nm);
  const auto d1 = exact_distribution(circuits.at("u_v1"), &nm);
  const double valid = d0.at("00") + d0.at("10") + d1.at("01") + d1.at("11");
  const double exact = (d0.at("00") + d1.at("01")) / valid;

  const double reference_sampled = 0.77564942534484;
  const double sigma = std::sqrt(exact * (1 - exact) / 100000.0);
  const double dt = seconds_since(t0);
  const bool ok = std::abs(reference_sampled - exact) <= 3 * sigma;
  std::ostringstream ss;
  ss << "noisy Hadamard reference run is within 3 sigma of our exact value "
     << exact << " (dev " << std::abs(reference_sampled - exact) << ", " << dt
     << " s)";
  report(6, ok && dt < 5.0, ss.str());
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  Histogram h;
  h.counts = {{"00", 4787}, {"01", 4663}, {"11", 314}, {"10", 236}};
  const MitigationInfo target{0.00539999999999996, 0.0018};
  const MitigationInfo ancilla{0.0048000000000000265, 0.0018};
  const QuasiHistogram q = mitigate_histogram(h, target, ancilla);

  const std::pair<const char *, double> printed[] = {
      {"00", 0.47778257531131735},
      {"01", 0.46866397190027914},
      {"10", 0.02272105079666005},
      {"11", 0.03083240199174341}};
  double worst = 0;
  for (const auto &[key, value] : printed)
    worst = std::max(worst, std::abs(q.at(key) - value));
  const double p2 = compute_mitigated_p2(SchemeMethod::direct_sum, {q});
  const double dt = seconds_since(t0);
  const bool ok = worst <= 3e-3 && std::abs(p2 - 0.9464) <= 3e-3;
  std::ostringstream ss;
  ss << "mitigation reproduces the reference fixture (max key dev " << worst
     << ", mitigated p2 " << p2 << ", " << dt * 1e3 << " ms)";
  report(7, ok && dt < 1e-3, ss.str());
}

void criterion_8() {
  std::mt19937_64 rng(20260824);
  std::uniform_real_distribution<double> cal(0.0, 0.05);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    Circuit c;
    c.append(HGate{QubitRole::target});
    c.append(RZGate{ang(rng), QubitRole::target});
    c.append(CXGate{QubitRole::target, QubitRole::ancilla});
    c.append(RYGate{ang(rng), QubitRole::ancilla});
    c.append(PGate{ang(rng), QubitRole::target});

    const MitigationInfo mt{cal(rng), cal(rng)};
    const MitigationInfo ma{cal(rng), cal(rng)};
    ReadoutError rt, ra;
    rt.rows = {{{1 - mt.prob_meas1_prep0, mt.prob_meas0_prep1},
                {mt.prob_meas1_prep0, 1 - mt.prob_meas0_prep1}}};
    ra.rows = {{{1 - ma.prob_meas1_prep0, ma.prob_meas0_prep1},
                {ma.prob_meas1_prep0, 1 - ma.prob_meas0_prep1}}};
    NoiseModel nm;
    nm.target = rt;
    nm.ancilla = ra;

    const auto clean = exact_distribution(c);
    const auto noisy = exact_distribution(c, &nm);
    const QuasiHistogram recovered = mitigate_distribution(noisy, mt, ma);
    for (const auto &key : kOutcomeKeys)
      worst = std::max(worst, std::abs(recovered.at(key) - clean.at(key)));
  }
  std::ostringstream ss;
  ss << "mitigation inverts forward readout noise on 200 random cases "
        "(max dev "
     << worst << ")";
  report(8, worst <= 1e-9, ss.str());
}

void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tmp = std::filesystem::temp_directory_path() / "qbench_accept_9";
  std::filesystem::remove_all(tmp);
  std::filesystem::create_directories(tmp);

  ExperimentConfig exp;
  exp.type = "certification-fourier";
  exp.qubits = {{0, 1}};
  exp.angles = {"0", "2 * pi", 8};
  exp.delta = 0.05;
  exp.gateset = GateSet::ibmq;
  exp.method = SchemeMethod::direct_sum;
  exp.num_shots = 2000;

  BackendConfig sync_backend{"local", false, "local_simulator", 555, {}, {}};
  BackendConfig async_backend{"local", true, "local_simulator", 555, {}, {}};

  JobStore sync_store(tmp / "jobs_sync");
  JobStore async_store(tmp / "jobs_async");
  const auto sync_file = std::get<ResolvedResultFile>(
      run_benchmark(exp, sync_backend, sync_store));
  const auto async_file = std::get<AsyncResultFile>(
      run_benchmark(exp, async_backend, async_store));

  bool ok = job_status(async_file, async_store).at("DONE") == 1;
  const ResolvedResultFile resolved = resolve(async_file, async_store);
  ok = ok && resolved.data.size() == sync_file.data.size();
  for (std::size_t i = 0; ok && i < resolved.data.size(); ++i) {
    const auto &a = resolved.data[i];
    const auto &b = sync_file.data[i];
    ok = a.target == b.target && a.ancilla == b.ancilla && a.phi == b.phi &&
         a.results_per_circuit.size() == b.results_per_circuit.size();
    for (std::size_t j = 0; ok && j < a.results_per_circuit.size(); ++j)
      ok = a.results_per_circuit[j].histogram.counts ==
           b.results_per_circuit[j].histogram.counts;
  }

  const auto csv = tmp / "r.csv";
  ok = ok && tabulate(resolved, csv) == 8;
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  ok = ok &&
       header ==
           "target,ancilla,phi,delta,ideal_prob,cert_prob,mitigated_cert_prob";
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  ok = ok && rows == 8;

  const double dt = seconds_since(t0);
  std::filesystem::remove_all(tmp);
  std::ostringstream ss;
  ss << "async workflow resolves to the synchronous records and tabulates 8 "
        "rows ("
     << dt << " s)";
  report(9, ok && dt < 10.0, ss.str());
}

void criterion_10() {
  std::vector<std::pair<double, double>> grid;
  const double eps = 1e-6;
  const double special_phi[] = {0.0, kPi - eps, kPi, kPi + eps, 2 * kPi - eps};
  const double deltas[] = {0.01, 0.05, 0.25, 0.5};
  for (int i = 0; i < 45; ++i) {
    const double phi = 2 * kPi * i / 44.0;
    for (double delta : deltas) grid.emplace_back(phi, delta);
    // Regime-boundary delta for this phi: 2*delta = 1 + cos(phi).
    grid.emplace_back(phi, (1.0 + std::cos(phi)) / 2.0);
  }
  for (double phi : special_phi)
    for (double delta : deltas) grid.emplace_back(phi, delta);

  bool unitary_ok = true;
  double worst = 0;
  for (const auto &[phi, delta] : grid) {
    const auto [v0, v1] =
        optimal_final_unitaries(FourierAngle(phi), Significance(delta));
    unitary_ok = unitary_ok && is_unitary(v0, 1e-9) && is_unitary(v1, 1e-9);
    worst = std::max(
        worst, std::abs(exact_direct_sum_p2(phi, delta) -
                        ideal_p2(FourierAngle(phi), Significance(delta))));
  }
  std::ostringstream ss;
  ss << "final unitaries stay unitary and reproduce ideal_p2 through the "
        "exact pipeline on "
     << grid.size() << " grid points (max dev " << worst << ")";
  report(10, unitary_ok && worst <= 1e-9, ss.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
