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

#include "qbench/circuits.hpp"

#include <cmath>

namespace qbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_2pi(double a) {
  double r = std::fmod(a, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  return r;
}

bool is_zero_mod_2pi(double a, double tol = 1e-12) {
  double r = wrap_2pi(a);
  return r < tol || 2 * kPi - r < tol;
}

}  // namespace

Gate bind(const Gate1q &g, QubitRole on) {
  switch (g.kind) {
    case Gate1q::Kind::H:
      return HGate{on};
    case Gate1q::Kind::X:
      return XGate{on};
    case Gate1q::Kind::SX:
      return SXGate{on};
    case Gate1q::Kind::RY:
      return RYGate{g.angle, on};
    case Gate1q::Kind::RZ:
      return RZGate{g.angle, on};
    case Gate1q::Kind::P:
      return PGate{g.angle, on};
    case Gate1q::Kind::Raw:
      return Raw1Gate{g.u, on};
  }
  throw std::logic_error("bind: unknown gate kind");
}

Unitary2 gate1q_unitary(const Gate1q &g) {
  switch (g.kind) {
    case Gate1q::Kind::H:
      return hadamard();
    case Gate1q::Kind::X:
      return pauli_x();
    case Gate1q::Kind::SX:
      return sqrt_x();
    case Gate1q::Kind::RY:
      return rot_y(g.angle);
    case Gate1q::Kind::RZ:
      return rot_z(g.angle);
    case Gate1q::Kind::P:
      return phase_gate(g.angle);
    case Gate1q::Kind::Raw:
      return g.u;
  }
  throw std::logic_error("gate1q_unitary: unknown gate kind");
}

Unitary2 fragment_unitary(const Fragment1q &f) {
  Unitary2 u = identity2();
  for (const auto &g : f) u = matmul(gate1q_unitary(g), u);
  return u;
}

void Circuit::append(const Circuit &fragment) {
  gates.insert(gates.end(), fragment.gates.begin(), fragment.gates.end());
}

void Circuit::append(const Fragment1q &fragment, QubitRole on) {
  for (const auto &g : fragment) gates.push_back(bind(g, on));
}

bool respects_gateset(const Circuit &c) {
  if (c.gateset == GateSet::generic) return true;
  for (const auto &g : c.gates) {
    bool ok = std::holds_alternative<RZGate>(g) ||
              std::holds_alternative<SXGate>(g) ||
              std::holds_alternative<XGate>(g) ||
              std::holds_alternative<CXGate>(g);
    if (!ok) return false;
  }
  return true;
}

Circuit bell_prep() {
  Circuit c;
  c.append(HGate{QubitRole::target});
  c.append(CXGate{QubitRole::target, QubitRole::ancilla});
  return c;
}

Fragment1q fourier_u_dag(double phi) {
  if (!std::isfinite(phi))
    throw std::invalid_argument("fourier_u_dag: phi must be finite");
  return {Gate1q{Gate1q::Kind::H}, Gate1q{Gate1q::Kind::P, -phi},
          Gate1q{Gate1q::Kind::H}};
}

HadamardComponents hadamard_example_components(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("hadamard_example_components: delta not in [0,1]");
  const double theta = 2 * std::asin(std::sqrt(delta));
  HadamardComponents comps;
  comps.state_prep = bell_prep();
  comps.u_dag = {Gate1q{Gate1q::Kind::H}};
  comps.v0_dag = {Gate1q{Gate1q::Kind::RY, theta}};
  comps.v1_dag = {Gate1q{Gate1q::Kind::RY, theta}, Gate1q{Gate1q::Kind::X}};
  Circuit ds;
  ds.append(PGate{-kPi, QubitRole::target});
  ds.append(RYGate{-theta, QubitRole::target});
  ds.append(CXGate{QubitRole::target, QubitRole::ancilla});
  comps.v0_v1_direct_sum_dag = ds;
  return comps;
}

namespace {

/// ZYZ Euler angles: u = e^{i alpha} RZ(beta) RY(gamma) RZ(lambda).
struct Zyz {
  double alpha, beta, gamma, lambda;
};

Zyz zyz_decompose(const Unitary2 &u) {
  const Complex det = u.at(0, 0) * u.at(1, 1) - u.at(0, 1) * u.at(1, 0);
  const Complex s = std::sqrt(det);
  Unitary2 v = u;
  for (auto &e : v.m) e /= s;
  const Complex a = v.at(0, 0);
  const Complex b = v.at(1, 0);
  Zyz r{};
  r.alpha = std::arg(s);
  r.gamma = 2 * std::atan2(std::abs(b), std::abs(a));
  if (std::abs(b) < 1e-14) {
    r.beta = 0;
    r.lambda = -2 * std::arg(a);
  } else if (std::abs(a) < 1e-14) {
    r.lambda = 0;
    r.beta = 2 * std::arg(b);
  } else {
    r.beta = std::arg(b) - std::arg(a);
    r.lambda = -std::arg(a) - std::arg(b);
  }
  return r;
}

void push_rz(std::vector<Gate1q> &out, double angle) {
  if (!is_zero_mod_2pi(angle)) out.push_back(Gate1q{Gate1q::Kind::RZ, angle});
}

// RY(theta) == SX RZ(pi - theta) SX RZ(-pi) up to global phase.
void push_ry_ibmq(std::vector<Gate1q> &out, double gamma, double pre_rz) {
  push_rz(out, pre_rz - kPi);
  out.push_back(Gate1q{Gate1q::Kind::SX});
  push_rz(out, kPi - gamma);
  out.push_back(Gate1q{Gate1q::Kind::SX});
}

}  // namespace

std::vector<Gate1q> decompose_1q_ibmq(const Unitary2 &u) {
  if (!is_unitary(u)) throw NonUnitaryInput("decompose_1q_ibmq: input not unitary");
  if (equal_up_to_phase(u, identity2(), 1e-12)) return {};
  const Zyz e = zyz_decompose(u);
  std::vector<Gate1q> out;
  if (std::abs(e.gamma) < 1e-14) {
    push_rz(out, e.beta + e.lambda);
    return out;
  }
  // Application order: RZ(lambda), RY(gamma) expansion, RZ(beta).
  push_ry_ibmq(out, e.gamma, e.lambda);
  push_rz(out, e.beta);
  return out;
}

Circuit direct_sum_block(const Unitary2 &v0, const Unitary2 &v1, GateSet gs) {
  if (!is_unitary(v0) || !is_unitary(v1))
    throw NonUnitaryInput("direct_sum_block: blocks must be unitary");
  Circuit c;
  c.gateset = gs;
  if (gs == GateSet::generic) {
    // |0><0|_t (x) V0^dag + |1><1|_t (x) V1^dag; index = 2*ancilla + target.
    const Unitary2 v0d = dagger(v0), v1d = dagger(v1);
    Unitary4 d;
    for (std::size_t t = 0; t < 2; ++t) {
      const Unitary2 &blk = (t == 0) ? v0d : v1d;
      for (std::size_t ar = 0; ar < 2; ++ar)
        for (std::size_t ac = 0; ac < 2; ++ac)
          d.at(2 * ar + t, 2 * ac + t) = blk.at(ar, ac);
    }
    c.append(Raw2Gate{d});
    return c;
  }
  // ABC synthesis: D = (V0^dag on ancilla) . C-W with W = V0 V1^dag,
  // control on the target qubit.
  const Unitary2 w = matmul(v0, dagger(v1));
  const Zyz e = zyz_decompose(w);
  const Unitary2 gate_c = rot_z((e.lambda - e.beta) / 2);
  const Unitary2 gate_b =
      matmul(rot_y(-e.gamma / 2), rot_z(-(e.lambda + e.beta) / 2));
  const Unitary2 gate_a = matmul(rot_z(e.beta), rot_y(e.gamma / 2));

  Circuit generic;
  generic.append(Raw1Gate{gate_c, QubitRole::ancilla});
  generic.append(CXGate{QubitRole::target, QubitRole::ancilla});
  generic.append(Raw1Gate{gate_b, QubitRole::ancilla});
  generic.append(CXGate{QubitRole::target, QubitRole::ancilla});
  generic.append(Raw1Gate{gate_a, QubitRole::ancilla});
  generic.append(Raw1Gate{phase_gate(e.alpha), QubitRole::target});
  generic.append(Raw1Gate{dagger(v0), QubitRole::ancilla});
  return lower_to_ibmq(generic);
}

Circuit lower_to_ibmq(const Circuit &c) {
  Circuit out;
  out.measure_all = c.measure_all;
  out.gateset = GateSet::ibmq;
  for (const auto &g : c.gates) {
    if (std::holds_alternative<CXGate>(g) || std::holds_alternative<XGate>(g) ||
        std::holds_alternative<SXGate>(g) || std::holds_alternative<RZGate>(g)) {
      out.append(g);
      continue;
    }
    if (std::holds_alternative<Raw2Gate>(g))
      throw std::invalid_argument("lower_to_ibmq: cannot lower a Raw2 gate");
    QubitRole on;
    Unitary2 u;
    if (const auto *h = std::get_if<HGate>(&g)) {
      on = h->on;
      u = hadamard();
    } else if (const auto *ry = std::get_if<RYGate>(&g)) {
      on = ry->on;
      u = rot_y(ry->theta);
    } else if (const auto *p = std::get_if<PGate>(&g)) {
      on = p->on;
      u = phase_gate(p->lambda);
    } else {
      const auto &raw = std::get<Raw1Gate>(g);
      on = raw.on;
      u = raw.u;
    }
    for (const auto &low : decompose_1q_ibmq(u)) out.append(bind(low, on));
  }
  return out;
}

Unitary4 gate_unitary(const Gate &g) {
  auto embed = [](const Unitary2 &u, QubitRole on) {
    return on == QubitRole::target ? tensor(identity2(), u)
                                   : tensor(u, identity2());
  };
  if (const auto *h = std::get_if<HGate>(&g)) return embed(hadamard(), h->on);
  if (const auto *x = std::get_if<XGate>(&g)) return embed(pauli_x(), x->on);
  if (const auto *sx = std::get_if<SXGate>(&g)) return embed(sqrt_x(), sx->on);
  if (const auto *ry = std::get_if<RYGate>(&g))
    return embed(rot_y(ry->theta), ry->on);
  if (const auto *rz = std::get_if<RZGate>(&g))
    return embed(rot_z(rz->theta), rz->on);
  if (const auto *p = std::get_if<PGate>(&g))
    return embed(phase_gate(p->lambda), p->on);
  if (const auto *raw1 = std::get_if<Raw1Gate>(&g)) return embed(raw1->u, raw1->on);
  if (const auto *raw2 = std::get_if<Raw2Gate>(&g)) return raw2->u;
  const auto &cx = std::get<CXGate>(g);
  // Basis index = 2*ancilla + target; flip the gate_target bit when the
  // control bit is 1.
  Unitary4 m;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t t = 0; t < 2; ++t) {
      std::size_t ctrl = (cx.control == QubitRole::target) ? t : a;
      std::size_t a2 = a, t2 = t;
      if (ctrl == 1) {
        if (cx.gate_target == QubitRole::target)
          t2 ^= 1;
        else
          a2 ^= 1;
      }
      m.at(2 * a2 + t2, 2 * a + t) = 1;
    }
  return m;
}

Unitary4 circuit_unitary(const Circuit &c) {
  Unitary4 u = identity4();
  for (const auto &g : c.gates) u = matmul(gate_unitary(g), u);
  return u;
}

}  // namespace qbench
