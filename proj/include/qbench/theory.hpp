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
 * Closed-form certification theory for the parametrized Fourier family of
 * qubit von Neumann measurements: the family unitaries, regime
 * classification, optimal final unitaries, the piecewise ideal type-II
 * error probability, and an independent q-numerical-range optimization
 * oracle for the same quantity.
 *
 * Certifying P_U against the computational-basis measurement P_1 at
 * statistical significance delta means bounding the type-I error by delta
 * and minimizing the type-II error p_II. For U_phi = H diag(1, e^{i phi}) H
 * the minimum has the closed form implemented by ideal_p2; the general
 * expression max_E nu^2_{sqrt(1-delta)}(U E) over diagonal unitaries E is
 * implemented by p2_via_qrange as a grid/refinement optimizer and serves
 * as a cross-check oracle.
 */

#pragma once

#include <utility>

#include "qbench/linalg.hpp"

namespace qbench {

/// Statistical significance, clamped into [0,1] at construction.
class Significance {
 public:
  explicit Significance(double delta);
  double delta() const { return delta_; }

 private:
  double delta_;
};

/// Fourier family angle, reduced mod 2*pi into [0, 2*pi) at construction.
class FourierAngle {
 public:
  explicit FourierAngle(double phi);
  double phi() const { return phi_; }

 private:
  double phi_;
};

enum class Regime : int { one = 1, two = 2, three = 3 };

/// Optimal certification strategy for one (phi, delta) point: Bell input
/// state plus the final unitaries.
struct CertStrategy {
  Ket4 input_state;
  Unitary2 v0;
  Unitary2 v1;
  Regime regime;
};

/// Free parameters of the grid optimizer behind nu_q / p2_via_qrange.
struct QGridConfig {
  int coarse_points_per_axis = 64;
  int refinement_iterations = 40;
  double tolerance = 1e-4;
};

struct BadQ : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// U_phi = H diag(1, e^{i phi}) H^dag, entries (1 +- e^{i phi})/2.
Unitary2 fourier_unitary(FourierAngle phi);

/// Regime 1: sqrt(1+cos phi) >= sqrt(2 delta) and phi in [0, pi).
/// Regime 2: sqrt(1+cos phi) <  sqrt(2 delta).
/// Regime 3: sqrt(1+cos phi) >= sqrt(2 delta) and phi in [pi, 2 pi).
/// Boundary ties go to the ">=" branch.
Regime regime_of(FourierAngle phi, Significance delta);

/// Optimal final unitaries (V0, V1) for the regime of (phi, delta).
///
/// The conditional single-qubit states produced by U_phi on the Bell input
/// carry a relative phase i on their orthogonal component, so the accept
/// columns must carry the matching phase for the scheme to attain the
/// minimal type-II error. The real-valued regime matrices absorb into
/// V0 -> diag(1, i) V0 and V1 -> diag(-i, 1) V1, uniformly over all three
/// regimes; plugged into the exact scheme these reproduce ideal_p2 to
/// machine precision at every angle. The phi = pi singularity of the
/// regime-2 entry sin(phi)/(2|cos(phi/2)|) is resolved as
/// sign(cos(phi/2)) * sin(phi/2) with sign(0) := +1.
std::pair<Unitary2, Unitary2> optimal_final_unitaries(FourierAngle phi,
                                                      Significance delta);

/// Bell input state plus optimal_final_unitaries plus regime label.
CertStrategy make_strategy(FourierAngle phi, Significance delta);

/// Piecewise minimized type-II error: with c = |1 + e^{i phi}|/2,
/// (c sqrt(1-delta) - sqrt(1-c^2) sqrt(delta))^2 when c > sqrt(delta),
/// otherwise 0.
double ideal_p2(FourierAngle phi, Significance delta);

/// Hadamard-basis worked example: (sqrt(1-delta) - sqrt(delta))^2 / 2.
double hadamard_ideal_p2(double delta);

/// Distance of the q-numerical range W_q(a) to zero:
/// min |<phi| a |psi>| over unit pairs with <phi|psi> = q, by coarse grid
/// over the 3 real parameters plus local refinement. Monotone nonincreasing
/// under refinement. Throws BadQ for q outside [0,1].
double nu_q(const Unitary2 &a, double q, const QGridConfig &cfg = {});

/// max over theta of nu^2_{sqrt(1-delta)}(u diag(1, e^{i theta})), the
/// optimization-derived route to the minimized type-II error.
double p2_via_qrange(const Unitary2 &u, Significance delta,
                     const QGridConfig &cfg = {});

}  // namespace qbench
