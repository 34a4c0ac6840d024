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

#include "qbench/linalg.hpp"

namespace qbench {

Unitary2 matmul(const Unitary2 &a, const Unitary2 &b) {
  Unitary2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Complex s = 0;
      for (std::size_t k = 0; k < 2; ++k) s += a.at(i, k) * b.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Unitary4 matmul(const Unitary4 &a, const Unitary4 &b) {
  Unitary4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Complex s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Unitary4 tensor(const Unitary2 &ancilla_factor, const Unitary2 &target_factor) {
  Unitary4 r;
  for (std::size_t ar = 0; ar < 2; ++ar)
    for (std::size_t ac = 0; ac < 2; ++ac)
      for (std::size_t tr = 0; tr < 2; ++tr)
        for (std::size_t tc = 0; tc < 2; ++tc)
          r.at(2 * ar + tr, 2 * ac + tc) =
              ancilla_factor.at(ar, ac) * target_factor.at(tr, tc);
  return r;
}

Unitary2 dagger(const Unitary2 &m) {
  Unitary2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r.at(i, j) = std::conj(m.at(j, i));
  return r;
}

Unitary4 dagger(const Unitary4 &m) {
  Unitary4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r.at(i, j) = std::conj(m.at(j, i));
  return r;
}

Ket4 apply(const Unitary4 &m, const Ket4 &s) {
  Ket4 r;
  for (std::size_t i = 0; i < 4; ++i) {
    Complex acc = 0;
    for (std::size_t j = 0; j < 4; ++j) acc += m.at(i, j) * s[j];
    r[i] = acc;
  }
  return r;
}

Ket2 apply(const Unitary2 &m, const Ket2 &s) {
  Ket2 r;
  for (std::size_t i = 0; i < 2; ++i) {
    Complex acc = 0;
    for (std::size_t j = 0; j < 2; ++j) acc += m.at(i, j) * s[j];
    r[i] = acc;
  }
  return r;
}

namespace {

template <typename M, typename Id>
bool is_unitary_impl(const M &m, double tol, std::size_t n, Id identity) {
  if (tol <= 0) throw std::invalid_argument("is_unitary: tol must be > 0");
  M prod = matmul(m, dagger(m));
  M id = identity();
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(prod.at(i, j) - id.at(i, j)));
  return worst <= tol;
}

template <typename M>
bool equal_up_to_phase_impl(const M &a, const M &b, double tol, std::size_t nn) {
  // Phase fixed by the largest entry of b.
  std::size_t best = 0;
  for (std::size_t k = 1; k < nn; ++k)
    if (std::abs(b.m[k]) > std::abs(b.m[best])) best = k;
  if (std::abs(b.m[best]) < tol) {
    for (std::size_t k = 0; k < nn; ++k)
      if (std::abs(a.m[k]) > tol) return false;
    return true;
  }
  Complex phase = a.m[best] / b.m[best];
  double mag = std::abs(phase);
  if (std::abs(mag - 1.0) > tol) return false;
  phase /= mag;
  for (std::size_t k = 0; k < nn; ++k)
    if (std::abs(a.m[k] - phase * b.m[k]) > tol) return false;
  return true;
}

}  // namespace

bool is_unitary(const Unitary2 &m, double tol) {
  return is_unitary_impl(m, tol, 2, identity2);
}

bool is_unitary(const Unitary4 &m, double tol) {
  return is_unitary_impl(m, tol, 4, identity4);
}

double norm(const Ket2 &s) {
  return std::sqrt(std::norm(s[0]) + std::norm(s[1]));
}

double norm(const Ket4 &s) {
  double acc = 0;
  for (const auto &a : s.amp) acc += std::norm(a);
  return std::sqrt(acc);
}

double max_abs_diff(const Unitary2 &a, const Unitary2 &b) {
  double worst = 0;
  for (std::size_t k = 0; k < 4; ++k)
    worst = std::max(worst, std::abs(a.m[k] - b.m[k]));
  return worst;
}

double max_abs_diff(const Unitary4 &a, const Unitary4 &b) {
  double worst = 0;
  for (std::size_t k = 0; k < 16; ++k)
    worst = std::max(worst, std::abs(a.m[k] - b.m[k]));
  return worst;
}

bool equal_up_to_phase(const Unitary2 &a, const Unitary2 &b, double tol) {
  return equal_up_to_phase_impl(a, b, tol, 4);
}

bool equal_up_to_phase(const Unitary4 &a, const Unitary4 &b, double tol) {
  return equal_up_to_phase_impl(a, b, tol, 16);
}

Unitary2 identity2() {
  Unitary2 r;
  r.at(0, 0) = 1;
  r.at(1, 1) = 1;
  return r;
}

Unitary4 identity4() {
  Unitary4 r;
  for (std::size_t i = 0; i < 4; ++i) r.at(i, i) = 1;
  return r;
}

Unitary2 pauli_x() {
  Unitary2 r;
  r.at(0, 1) = 1;
  r.at(1, 0) = 1;
  return r;
}

Unitary2 pauli_z() {
  Unitary2 r;
  r.at(0, 0) = 1;
  r.at(1, 1) = -1;
  return r;
}

Unitary2 hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Unitary2 r;
  r.at(0, 0) = s;
  r.at(0, 1) = s;
  r.at(1, 0) = s;
  r.at(1, 1) = -s;
  return r;
}

Unitary2 sqrt_x() {
  Unitary2 r;
  r.at(0, 0) = Complex(0.5, 0.5);
  r.at(0, 1) = Complex(0.5, -0.5);
  r.at(1, 0) = Complex(0.5, -0.5);
  r.at(1, 1) = Complex(0.5, 0.5);
  return r;
}

Unitary2 rot_y(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Unitary2 r;
  r.at(0, 0) = c;
  r.at(0, 1) = -s;
  r.at(1, 0) = s;
  r.at(1, 1) = c;
  return r;
}

Unitary2 rot_z(double theta) {
  Unitary2 r;
  r.at(0, 0) = std::polar(1.0, -theta / 2);
  r.at(1, 1) = std::polar(1.0, theta / 2);
  return r;
}

Unitary2 phase_gate(double lambda) {
  Unitary2 r;
  r.at(0, 0) = 1;
  r.at(1, 1) = std::polar(1.0, lambda);
  return r;
}

Unitary2 diag2(Complex a, Complex b) {
  Unitary2 r;
  r.at(0, 0) = a;
  r.at(1, 1) = b;
  return r;
}

Ket4 basis_ket4(std::size_t index) {
  Ket4 r;
  r[index] = 1;
  return r;
}

Ket4 bell_state() {
  const double s = 1.0 / std::sqrt(2.0);
  Ket4 r;
  r[0] = s;
  r[3] = s;
  return r;
}

}  // namespace qbench
