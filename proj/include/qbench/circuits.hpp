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
 * Gate-level intermediate representation of the certification circuits,
 * gate-set decomposition, and builders for the Bell preparation, the
 * Fourier-family components, the Hadamard worked example and the
 * direct-sum block.
 */

#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "qbench/linalg.hpp"

namespace qbench {

enum class QubitRole { target, ancilla };

enum class GateSet { ibmq, generic };

struct HGate {
  QubitRole on;
};
struct XGate {
  QubitRole on;
};
struct SXGate {
  QubitRole on;
};
struct RYGate {
  double theta;
  QubitRole on;
};
struct RZGate {
  double theta;
  QubitRole on;
};
struct PGate {
  double lambda;
  QubitRole on;
};
struct CXGate {
  QubitRole control;
  QubitRole gate_target;
};
struct Raw1Gate {
  Unitary2 u;
  QubitRole on;
};
struct Raw2Gate {
  Unitary4 u;
};

using Gate = std::variant<HGate, XGate, SXGate, RYGate, RZGate, PGate, CXGate,
                          Raw1Gate, Raw2Gate>;

struct NonUnitaryInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A single-qubit gate sequence not yet bound to a qubit. Builders hand
/// these out so the assembly step can place them on target or ancilla.
struct Gate1q {
  enum class Kind { H, X, SX, RY, RZ, P, Raw } kind;
  double angle = 0;
  Unitary2 u;  // Raw only
};

using Fragment1q = std::vector<Gate1q>;

Gate bind(const Gate1q &g, QubitRole on);
Unitary2 gate1q_unitary(const Gate1q &g);
/// Product of the fragment's gates, in application order.
Unitary2 fragment_unitary(const Fragment1q &f);

/// An ordered two-qubit gate list over the (target, ancilla) pair.
/// When gateset == ibmq only {RZ, SX, X, CX} may appear; generic circuits
/// may additionally carry Raw gates.
struct Circuit {
  std::vector<Gate> gates;
  bool measure_all = true;
  GateSet gateset = GateSet::generic;

  void append(const Gate &g) { gates.push_back(g); }
  void append(const Circuit &fragment);
  void append(const Fragment1q &fragment, QubitRole on);
};

/// True iff every gate is admissible for the circuit's gate set.
bool respects_gateset(const Circuit &c);

/// H on target followed by CX(target -> ancilla); maps |00> to the Bell state.
Circuit bell_prep();

/// U_phi^dag on one qubit, realized as H, P(-phi), H (H is self-adjoint).
Fragment1q fourier_u_dag(double phi);

/// Components of the Hadamard-basis certification example. The direct-sum
/// fragment is the verbatim gate sequence P(-pi), RY(-2 asin sqrt(delta)),
/// CX(target -> ancilla); it is not entrywise equal to the abstract
/// controlled operator (it acts on the other qubit of the pair) but yields
/// identical measurement statistics on the full pipeline.
struct HadamardComponents {
  Circuit state_prep;
  Fragment1q u_dag;
  Fragment1q v0_dag;
  Fragment1q v1_dag;
  Circuit v0_v1_direct_sum_dag;
};

HadamardComponents hadamard_example_components(double delta);

/// Two-qubit fragment equal (up to global phase) to
/// |0><0| (x) V0^dag + |1><1| (x) V1^dag with the TARGET qubit as control
/// and the ancilla carrying V_i^dag. The generic gate set emits a single
/// Raw2 gate; ibmq emits the two-CX ABC synthesis.
/// Throws NonUnitaryInput if either block fails is_unitary.
Circuit direct_sum_block(const Unitary2 &v0, const Unitary2 &v1,
                         GateSet gs = GateSet::generic);

/// Decompose a single-qubit unitary over {RZ, SX, X}; the emitted product
/// equals u up to global phase within 1e-8. Returns an empty list for
/// (phase multiples of) the identity.
std::vector<Gate1q> decompose_1q_ibmq(const Unitary2 &u);

/// Rewrite every gate of c into the ibmq gate set {RZ, SX, X, CX}.
Circuit lower_to_ibmq(const Circuit &c);

/// Ordered product of the gate embeddings (testing oracle).
Unitary4 circuit_unitary(const Circuit &c);

/// 4x4 embedding of a single gate.
Unitary4 gate_unitary(const Gate &g);

}  // namespace qbench
