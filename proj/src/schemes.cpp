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

#include "qbench/schemes.hpp"

#include <cmath>

namespace qbench {

namespace {

void check_fragment(const Circuit &c, const char *what) {
  for (const auto &g : c.gates) {
    if (const auto *raw1 = std::get_if<Raw1Gate>(&g)) {
      if (!is_unitary(raw1->u))
        throw MalformedFragment(std::string(what) + ": non-unitary Raw1 gate");
    } else if (const auto *raw2 = std::get_if<Raw2Gate>(&g)) {
      if (!is_unitary(raw2->u))
        throw MalformedFragment(std::string(what) + ": non-unitary Raw2 gate");
    }
  }
}

Circuit finalize(Circuit c, GateSet gs) {
  c.measure_all = true;
  if (gs == GateSet::ibmq) c = lower_to_ibmq(c);
  c.gateset = gs;
  return c;
}

}  // namespace

std::map<std::string, Circuit> assemble_postselection(const Circuit &state_prep,
                                                      const Fragment1q &u_dag,
                                                      const Fragment1q &v0_dag,
                                                      const Fragment1q &v1_dag,
                                                      GateSet gs) {
  check_fragment(state_prep, "assemble_postselection");
  std::map<std::string, Circuit> out;
  const std::pair<const char *, const Fragment1q *> variants[] = {
      {"u_v0", &v0_dag}, {"u_v1", &v1_dag}};
  for (const auto &[name, v_dag] : variants) {
    Circuit c;
    c.append(state_prep);
    c.append(u_dag, QubitRole::target);
    c.append(*v_dag, QubitRole::ancilla);
    out[name] = finalize(std::move(c), gs);
  }
  return out;
}

Circuit assemble_direct_sum(const Circuit &state_prep, const Fragment1q &u_dag,
                            const Circuit &v0_v1_block, GateSet gs) {
  check_fragment(state_prep, "assemble_direct_sum");
  check_fragment(v0_v1_block, "assemble_direct_sum");
  Circuit c;
  c.append(state_prep);
  c.append(u_dag, QubitRole::target);
  c.append(v0_v1_block);
  return finalize(std::move(c), gs);
}

namespace {

template <typename Value, typename Lookup0, typename Lookup1>
double p2_postselection_impl(Lookup0 v0_at, Lookup1 v1_at) {
  // Valid: target bit (right char) equals the circuit label; accept: ancilla
  // bit (left char) is 0.
  const Value valid = v0_at("00") + v0_at("10") + v1_at("01") + v1_at("11");
  const Value accepted = v0_at("00") + v1_at("01");
  if (!(static_cast<double>(valid) > 0))
    throw NoValidShots("postselection: no valid shots after filtering");
  return static_cast<double>(accepted) / static_cast<double>(valid);
}

template <typename Value, typename Lookup>
double p2_direct_sum_impl(Lookup at) {
  const Value total = at("00") + at("01") + at("10") + at("11");
  if (!(static_cast<double>(total) > 0))
    throw NoValidShots("direct_sum: empty histogram");
  return static_cast<double>(at("00") + at("01")) / static_cast<double>(total);
}

double quasi_at(const QuasiHistogram &h, const std::string &key) {
  auto it = h.find(key);
  return it == h.end() ? 0.0 : it->second;
}

}  // namespace

double compute_p2_postselection(const Histogram &u_v0_counts,
                                const Histogram &u_v1_counts) {
  auto v0 = [&](const char *k) { return u_v0_counts.at(k); };
  auto v1 = [&](const char *k) { return u_v1_counts.at(k); };
  return p2_postselection_impl<std::uint64_t>(v0, v1);
}

double compute_p2_direct_sum(const Histogram &counts) {
  auto at = [&](const char *k) { return counts.at(k); };
  return p2_direct_sum_impl<std::uint64_t, decltype(at)>(at);
}

QuasiHistogram mitigate_histogram(const Histogram &h,
                                  const MitigationInfo &target_info,
                                  const MitigationInfo &ancilla_info) {
  const std::uint64_t total = h.total();
  if (total == 0) throw NoValidShots("mitigate_histogram: empty histogram");
  std::map<std::string, double> freq;
  for (const auto &key : kOutcomeKeys)
    freq[key] =
        static_cast<double>(h.at(key)) / static_cast<double>(total);
  return mitigate_distribution(freq, target_info, ancilla_info);
}

QuasiHistogram mitigate_distribution(const std::map<std::string, double> &dist,
                                     const MitigationInfo &target_info,
                                     const MitigationInfo &ancilla_info) {
  // Column = true bit: [[1-p10, p01], [p10, 1-p01]].
  auto confusion = [](const MitigationInfo &info) {
    return std::array<std::array<double, 2>, 2>{
        {{1.0 - info.prob_meas1_prep0, info.prob_meas0_prep1},
         {info.prob_meas1_prep0, 1.0 - info.prob_meas0_prep1}}};
  };
  auto inverse = [](const std::array<std::array<double, 2>, 2> &m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) < 1e-12)
      throw SingularConfusion("mitigate_histogram: singular confusion matrix");
    return std::array<std::array<double, 2>, 2>{
        {{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
  };
  const auto mt_inv = inverse(confusion(target_info));
  const auto ma_inv = inverse(confusion(ancilla_info));

  std::array<double, 4> freq{};
  for (std::size_t i = 0; i < 4; ++i) {
    auto it = dist.find(kOutcomeKeys[i]);
    freq[i] = it == dist.end() ? 0.0 : it->second;
  }

  // Apply inv(Ma) (x) inv(Mt), then clip and renormalize.
  std::array<double, 4> quasi{};
  for (std::size_t a2 = 0; a2 < 2; ++a2)
    for (std::size_t t2 = 0; t2 < 2; ++t2)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t t = 0; t < 2; ++t)
          quasi[2 * a2 + t2] += ma_inv[a2][a] * mt_inv[t2][t] * freq[2 * a + t];

  double sum = 0;
  for (auto &v : quasi) {
    v = std::max(0.0, v);
    sum += v;
  }
  if (!(sum > 0))
    throw NoValidShots("mitigate_histogram: all weight clipped away");
  QuasiHistogram out;
  for (std::size_t i = 0; i < 4; ++i) out[kOutcomeKeys[i]] = quasi[i] / sum;
  return out;
}

double compute_mitigated_p2(SchemeMethod method,
                            const std::vector<QuasiHistogram> &mitigated) {
  if (method == SchemeMethod::postselection) {
    if (mitigated.size() != 2)
      throw std::invalid_argument(
          "compute_mitigated_p2: postselection expects {u_v0, u_v1}");
    auto v0 = [&](const char *k) { return quasi_at(mitigated[0], k); };
    auto v1 = [&](const char *k) { return quasi_at(mitigated[1], k); };
    return p2_postselection_impl<double>(v0, v1);
  }
  if (mitigated.size() != 1)
    throw std::invalid_argument(
        "compute_mitigated_p2: direct_sum expects one histogram");
  auto at = [&](const char *k) { return quasi_at(mitigated[0], k); };
  return p2_direct_sum_impl<double, decltype(at)>(at);
}

}  // namespace qbench
