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

#include "qbench/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qbench/circuits.hpp"

namespace qbench {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

/// cos(phi) evaluated on the representative folded into [0, pi], so the
/// phi <-> 2*pi - phi symmetry holds bitwise.
double folded_cos(double phi) {
  return std::cos(phi <= kPi ? phi : kTwoPi - phi);
}

}  // namespace

Significance::Significance(double delta) {
  if (std::isnan(delta))
    throw std::invalid_argument("Significance: delta must not be NaN");
  delta_ = std::clamp(delta, 0.0, 1.0);
}

FourierAngle::FourierAngle(double phi) {
  if (!std::isfinite(phi))
    throw std::invalid_argument("FourierAngle: phi must be finite");
  phi_ = std::fmod(phi, kTwoPi);
  if (phi_ < 0) phi_ += kTwoPi;
}

Unitary2 fourier_unitary(FourierAngle phi) {
  const Complex e = std::polar(1.0, phi.phi());
  Unitary2 u;
  u.at(0, 0) = (1.0 + e) / 2.0;
  u.at(0, 1) = (1.0 - e) / 2.0;
  u.at(1, 0) = (1.0 - e) / 2.0;
  u.at(1, 1) = (1.0 + e) / 2.0;
  return u;
}

Regime regime_of(FourierAngle phi, Significance delta) {
  const double lhs = std::sqrt(1.0 + folded_cos(phi.phi()));
  const double rhs = std::sqrt(2.0 * delta.delta());
  if (lhs < rhs) return Regime::two;
  return phi.phi() < kPi ? Regime::one : Regime::three;
}

std::pair<Unitary2, Unitary2> optimal_final_unitaries(FourierAngle phi,
                                                      Significance delta) {
  const double d = delta.delta();
  const double sd = std::sqrt(d), sd1 = std::sqrt(1.0 - d);
  Unitary2 v0, v1;
  switch (regime_of(phi, delta)) {
    case Regime::one:
      v0.at(0, 0) = sd1, v0.at(0, 1) = sd;
      v0.at(1, 0) = -sd, v0.at(1, 1) = sd1;
      v1.at(0, 0) = sd, v1.at(0, 1) = sd1;
      v1.at(1, 0) = sd1, v1.at(1, 1) = -sd;
      break;
    case Regime::three:
      v0.at(0, 0) = sd1, v0.at(0, 1) = -sd;
      v0.at(1, 0) = sd, v0.at(1, 1) = sd1;
      v1.at(0, 0) = -sd, v1.at(0, 1) = sd1;
      v1.at(1, 0) = sd1, v1.at(1, 1) = sd;
      break;
    case Regime::two: {
      const double s = std::sin(phi.phi() / 2);
      const double c = std::cos(phi.phi() / 2);
      // sin(phi)/(2|cos(phi/2)|) in its removable form, sign(0) := +1.
      const double sgn = (c >= 0) ? 1.0 : -1.0;
      v0.at(0, 0) = s, v0.at(0, 1) = std::abs(c);
      v0.at(1, 0) = -c, v0.at(1, 1) = sgn * s;
      v1.at(0, 0) = std::abs(c), v1.at(0, 1) = s;
      v1.at(1, 0) = sgn * s, v1.at(1, 1) = -c;
      break;
    }
  }
  // Phase correction: the Bell-conditioned states carry an i on their
  // orthogonal component (see header); without these diagonal factors the
  // scheme does not attain ideal_p2.
  const Complex im(0.0, 1.0);
  const Unitary2 d0 = diag2(1.0, im);
  const Unitary2 d1 = diag2(-im, 1.0);
  return {matmul(d0, v0), matmul(d1, v1)};
}

CertStrategy make_strategy(FourierAngle phi, Significance delta) {
  auto [v0, v1] = optimal_final_unitaries(phi, delta);
  return CertStrategy{bell_state(), v0, v1, regime_of(phi, delta)};
}

double ideal_p2(FourierAngle phi, Significance delta) {
  const double d = delta.delta();
  const double cos_phi = folded_cos(phi.phi());
  const double c2 = (1.0 + cos_phi) / 2.0;  // c^2 = |1 + e^{i phi}|^2 / 4
  if (c2 >= 1.0) return 1.0 - d;            // phi = 0: exact endpoint
  const double c = std::sqrt(c2);
  if (c <= std::sqrt(d)) return 0.0;
  const double v = c * std::sqrt(1.0 - d) - std::sqrt(1.0 - c2) * std::sqrt(d);
  return v * v;
}

double hadamard_ideal_p2(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("hadamard_ideal_p2: delta not in [0,1]");
  const double v = std::sqrt(1.0 - delta) - std::sqrt(delta);
  return 0.5 * v * v;
}

namespace {

/// |<phi| a |psi>| split into the u-independent pieces:
/// value(u) = |c1 + e^{iu} c2| with c1 = q <phi|a|phi>,
/// c2 = sqrt(1-q^2) <phi|a|phi_perp>, for |phi> = (cos s, e^{it} sin s).
struct PairEval {
  Complex c1, c2;

  double at_u(double cu, double su) const {
    return std::abs(c1 + Complex(cu, su) * c2);
  }
};

PairEval make_pair(const Unitary2 &a, double q, double qp, double s, double t) {
  const double cs = std::cos(s), sn = std::sin(s);
  const Complex et = std::polar(1.0, t);
  const Complex phi0 = cs, phi1 = et * sn;
  const Complex perp0 = -std::conj(et) * sn, perp1 = cs;
  const Complex a_phi0 = a.at(0, 0) * phi0 + a.at(0, 1) * phi1;
  const Complex a_phi1 = a.at(1, 0) * phi0 + a.at(1, 1) * phi1;
  const Complex a_perp0 = a.at(0, 0) * perp0 + a.at(0, 1) * perp1;
  const Complex a_perp1 = a.at(1, 0) * perp0 + a.at(1, 1) * perp1;
  PairEval pe;
  pe.c1 = q * (std::conj(phi0) * a_phi0 + std::conj(phi1) * a_phi1);
  pe.c2 = qp * (std::conj(phi0) * a_perp0 + std::conj(phi1) * a_perp1);
  return pe;
}

double point_value(const Unitary2 &a, double q, double qp, double s, double t,
                   double u) {
  return make_pair(a, q, qp, s, t).at_u(std::cos(u), std::sin(u));
}

}  // namespace

double nu_q(const Unitary2 &a, double q, const QGridConfig &cfg) {
  if (!(q >= 0.0 && q <= 1.0)) throw BadQ("nu_q: q must lie in [0,1]");
  const double qp = std::sqrt(std::max(0.0, 1.0 - q * q));
  const int n = std::max(2, cfg.coarse_points_per_axis);

  std::vector<double> cu(n), su(n);
  for (int k = 0; k < n; ++k) {
    const double u = kTwoPi * k / n;
    cu[k] = std::cos(u);
    su[k] = std::sin(u);
  }

  double best = std::numeric_limits<double>::infinity();
  double bs = 0, bt = 0, bu = 0;
  for (int i = 0; i < n; ++i) {
    const double s = (kPi / 2) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double t = kTwoPi * j / n;
      const PairEval pe = make_pair(a, q, qp, s, t);
      for (int k = 0; k < n; ++k) {
        const double v = pe.at_u(cu[k], su[k]);
        if (v < best) {
          best = v;
          bs = s, bt = t, bu = kTwoPi * k / n;
        }
      }
    }
  }

  // Local pattern refinement; best only ever decreases.
  double ws = (kPi / 2) / n, wt = kTwoPi / n, wu = kTwoPi / n;
  for (int iter = 0; iter < cfg.refinement_iterations; ++iter) {
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj)
        for (int dk = -2; dk <= 2; ++dk) {
          const double s = std::clamp(bs + ws * di / 2, 0.0, kPi / 2);
          const double t = bt + wt * dj / 2;
          const double u = bu + wu * dk / 2;
          const double v = point_value(a, q, qp, s, t, u);
          if (v < best) {
            best = v;
            bs = s, bt = t, bu = u;
          }
        }
    ws *= 0.65, wt *= 0.65, wu *= 0.65;
    if (ws < cfg.tolerance * 1e-3 && wt < cfg.tolerance * 1e-3) break;
  }
  return best;
}

double p2_via_qrange(const Unitary2 &u, Significance delta,
                     const QGridConfig &cfg) {
  if (!is_unitary(u)) throw NonUnitaryInput("p2_via_qrange: u not unitary");
  const double q = std::sqrt(1.0 - delta.delta());
  const int n = std::max(2, cfg.coarse_points_per_axis);
  auto value = [&](double theta) {
    const double v = nu_q(matmul(u, phase_gate(theta)), q, cfg);
    return v * v;
  };

  double best = -1.0, btheta = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = kTwoPi * k / n;
    const double v = value(theta);
    if (v > best) {  // strict: ties keep the smallest theta
      best = v;
      btheta = theta;
    }
  }
  double w = kTwoPi / n;
  for (int iter = 0; iter < cfg.refinement_iterations; ++iter) {
    for (int dk = -2; dk <= 2; ++dk) {
      if (dk == 0) continue;
      const double theta = btheta + w * dk / 2;
      const double v = value(theta);
      if (v > best) {
        best = v;
        btheta = theta;
      }
    }
    w *= 0.65;
  }
  return std::clamp(best, 0.0, 1.0);
}

}  // namespace qbench
