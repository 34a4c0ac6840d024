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
 * Minimal dense complex linear algebra for the 2- and 4-dimensional spaces
 * used by the certification circuits: kets, unitaries, tensor products,
 * adjoints and unitarity checks.
 *
 * Basis order is pinned globally: two-qubit amplitudes are ordered
 * |00>, |01>, |10>, |11> with the LEFT bit the ancilla and the RIGHT bit
 * the target qubit.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qbench {

using Complex = std::complex<double>;

inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kNormTol = 1e-10;

/// Two-dimensional state vector (single qubit).
struct Ket2 {
  std::array<Complex, 2> amp{};

  Complex &operator[](std::size_t i) { return amp[i]; }
  const Complex &operator[](std::size_t i) const { return amp[i]; }
};

/// Four-dimensional state vector over the (ancilla, target) pair.
struct Ket4 {
  std::array<Complex, 4> amp{};

  Complex &operator[](std::size_t i) { return amp[i]; }
  const Complex &operator[](std::size_t i) const { return amp[i]; }
};

/// Dense 2x2 complex matrix, row-major.
struct Unitary2 {
  std::array<Complex, 4> m{};

  Complex &at(std::size_t r, std::size_t c) { return m[2 * r + c]; }
  const Complex &at(std::size_t r, std::size_t c) const { return m[2 * r + c]; }
};

/// Dense 4x4 complex matrix, row-major.
struct Unitary4 {
  std::array<Complex, 16> m{};

  Complex &at(std::size_t r, std::size_t c) { return m[4 * r + c]; }
  const Complex &at(std::size_t r, std::size_t c) const { return m[4 * r + c]; }
};

Unitary2 matmul(const Unitary2 &a, const Unitary2 &b);
Unitary4 matmul(const Unitary4 &a, const Unitary4 &b);

/// Kronecker product with operand order (ancilla factor, target factor).
Unitary4 tensor(const Unitary2 &ancilla_factor, const Unitary2 &target_factor);

/// Conjugate transpose. An exact involution: dagger(dagger(m)) == m bitwise.
Unitary2 dagger(const Unitary2 &m);
Unitary4 dagger(const Unitary4 &m);

/// Matrix-vector product.
Ket4 apply(const Unitary4 &m, const Ket4 &s);
Ket2 apply(const Unitary2 &m, const Ket2 &s);

/// True iff max |U U^dag - I| <= tol elementwise. tol must be positive.
bool is_unitary(const Unitary2 &m, double tol = kUnitaryTol);
bool is_unitary(const Unitary4 &m, double tol = kUnitaryTol);

double norm(const Ket2 &s);
double norm(const Ket4 &s);

/// Largest elementwise absolute difference.
double max_abs_diff(const Unitary2 &a, const Unitary2 &b);
double max_abs_diff(const Unitary4 &a, const Unitary4 &b);

/// True iff a == e^{i gamma} b for some phase gamma, within tol elementwise.
bool equal_up_to_phase(const Unitary2 &a, const Unitary2 &b, double tol = 1e-8);
bool equal_up_to_phase(const Unitary4 &a, const Unitary4 &b, double tol = 1e-8);

// Common gates and constants.
Unitary2 identity2();
Unitary4 identity4();
Unitary2 pauli_x();
Unitary2 pauli_z();
Unitary2 hadamard();
Unitary2 sqrt_x();
Unitary2 rot_y(double theta);
Unitary2 rot_z(double theta);
/// diag(1, e^{i lambda}).
Unitary2 phase_gate(double lambda);
/// diag(a, b).
Unitary2 diag2(Complex a, Complex b);

Ket4 basis_ket4(std::size_t index);
/// (|00> + |11>) / sqrt(2).
Ket4 bell_state();

}  // namespace qbench
