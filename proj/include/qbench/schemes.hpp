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
 * Assembly of the postselection and direct-sum certification circuits,
 * conversion of measurement histograms into empirical type-II error
 * probabilities, and readout-error mitigation by exact confusion-matrix
 * inversion.
 *
 * Key convention everywhere: the left character of a histogram key is the
 * ancilla bit j (accept on j = 0), the right character is the target bit i.
 */

#pragma once

#include <map>
#include <string>
#include <vector>

#include "qbench/simulator.hpp"

namespace qbench {

enum class SchemeMethod { postselection, direct_sum };

/// Per-qubit readout calibration parameters.
struct MitigationInfo {
  double prob_meas0_prep1 = 0.0;
  double prob_meas1_prep0 = 0.0;
};

/// Post-mitigation outcome weights; normalized to sum 1 after clipping.
using QuasiHistogram = std::map<std::string, double>;

struct MalformedFragment : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoValidShots : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularConfusion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two circuits keyed "u_v0", "u_v1": state prep, U^dag on target, then
/// V_k^dag on the ancilla, measuring both qubits.
std::map<std::string, Circuit> assemble_postselection(
    const Circuit &state_prep, const Fragment1q &u_dag,
    const Fragment1q &v0_dag, const Fragment1q &v1_dag,
    GateSet gs = GateSet::generic);

/// One circuit: state prep, U^dag on target, then the direct-sum block.
Circuit assemble_direct_sum(const Circuit &state_prep, const Fragment1q &u_dag,
                            const Circuit &v0_v1_block,
                            GateSet gs = GateSet::generic);

/// Postselection counting: a shot is valid when the target bit matches the
/// circuit label (0 for u_v0, 1 for u_v1); accepted when additionally the
/// ancilla bit is 0. Returns N0 / N_total. Throws NoValidShots.
double compute_p2_postselection(const Histogram &u_v0_counts,
                                const Histogram &u_v1_counts);

/// Direct-sum counting: fraction of shots with ancilla bit 0
/// (keys "00" and "01"). Throws NoValidShots.
double compute_p2_direct_sum(const Histogram &counts);

/// Exact tensor-product confusion-matrix inversion applied to the empirical
/// frequencies, with negative weights clipped to 0 and the result
/// renormalized. Per-qubit confusion matrix (column = true bit):
/// [[1-p10, p01], [p10, 1-p01]]. Throws SingularConfusion.
QuasiHistogram mitigate_histogram(const Histogram &h,
                                  const MitigationInfo &target_info,
                                  const MitigationInfo &ancilla_info);

/// Same inversion applied to an already-normalized frequency vector
/// (e.g. an exact distribution) instead of integer counts.
QuasiHistogram mitigate_distribution(const std::map<std::string, double> &freq,
                                     const MitigationInfo &target_info,
                                     const MitigationInfo &ancilla_info);

/// The postselection / direct-sum counting rules applied to quasi-
/// probability weights. Postselection expects {u_v0, u_v1} in that order,
/// direct_sum a single histogram.
double compute_mitigated_p2(SchemeMethod method,
                            const std::vector<QuasiHistogram> &mitigated);

}  // namespace qbench
