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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "qbench/circuits.hpp"
#include "qbench/theory.hpp"
#include "test_util.hpp"

using namespace qbench;

namespace {

constexpr double kPi = testutil::kTestPi;

}  // namespace

TEST_CASE("Significance and FourierAngle canonicalization") {
  CHECK(Significance(-0.2).delta() == 0.0);
  CHECK(Significance(1.7).delta() == 1.0);
  CHECK(Significance(0.05).delta() == 0.05);
  CHECK_THROWS_AS(Significance(std::nan("")), std::invalid_argument);

  CHECK(FourierAngle(0.0).phi() == 0.0);
  CHECK(FourierAngle(-kPi / 2).phi() == doctest::Approx(3 * kPi / 2));
  CHECK(FourierAngle(5 * kPi).phi() == doctest::Approx(kPi));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(FourierAngle{inf}, std::invalid_argument);
}

TEST_CASE("fourier_unitary") {
  CHECK(max_abs_diff(fourier_unitary(FourierAngle(0.0)), identity2()) < 1e-15);
  CHECK(max_abs_diff(fourier_unitary(FourierAngle(kPi)), pauli_x()) < 1e-12);

  const double phi = 1.234;
  const Unitary2 u = fourier_unitary(FourierAngle(phi));
  const Complex e = std::polar(1.0, phi);
  CHECK(std::abs(u.at(0, 0) - (1.0 + e) / 2.0) < 1e-15);
  CHECK(std::abs(u.at(0, 1) - (1.0 - e) / 2.0) < 1e-15);
  CHECK(is_unitary(u, 1e-12));
}

TEST_CASE("regime_of fixtures") {
  const Significance d(0.05);
  CHECK(regime_of(FourierAngle(0.0), d) == Regime::one);
  // sqrt(1+cos(2.6927937...)) = 0.31469 < sqrt(0.1) = 0.31623.
  CHECK(regime_of(FourierAngle(2.6927937030769655), d) == Regime::two);
  CHECK(regime_of(FourierAngle(3.5903916041026207), d) == Regime::two);
  CHECK(regime_of(FourierAngle(5.385587406153931), d) == Regime::three);
  // Boundary ties go to the ">=" branch: pick delta so that
  // 2*delta == 1 + cos(phi) bitwise.
  const double phi_tie = 2.0;
  const double delta_tie = (1.0 + std::cos(phi_tie)) / 2.0;
  CHECK(regime_of(FourierAngle(phi_tie), Significance(delta_tie)) ==
        Regime::one);
  // delta = 0 never reaches regime 2.
  CHECK(regime_of(FourierAngle(kPi), Significance(0.0)) == Regime::three);
}

TEST_CASE("optimal_final_unitaries: regime-1 values carry the row phases") {
  const auto [v0, v1] =
      optimal_final_unitaries(FourierAngle(0.0), Significance(0.05));
  const double sd = std::sqrt(0.05), sd1 = std::sqrt(0.95);
  const Complex im(0, 1);
  // Row 0 matches the closed-form matrices; row 1 is multiplied by the
  // conditional-state phase (i for V0, with V1 carrying -i on its row 0).
  CHECK(std::abs(v0.at(0, 0) - sd1) < 1e-15);
  CHECK(std::abs(v0.at(0, 1) - sd) < 1e-15);
  CHECK(std::abs(v0.at(1, 0) - im * (-sd)) < 1e-15);
  CHECK(std::abs(v0.at(1, 1) - im * sd1) < 1e-15);
  CHECK(std::abs(v1.at(0, 0) - (-im) * sd) < 1e-15);
  CHECK(std::abs(v1.at(0, 1) - (-im) * sd1) < 1e-15);
  CHECK(std::abs(v1.at(1, 0) - sd1) < 1e-15);
  CHECK(std::abs(v1.at(1, 1) - (-sd)) < 1e-15);
}

TEST_CASE("optimal_final_unitaries: edge cases stay unitary") {
  // delta = 0 in regime 1: |V0| is the identity pattern, |V1| the swap.
  const auto [a0, a1] =
      optimal_final_unitaries(FourierAngle(1.0), Significance(0.0));
  CHECK(std::abs(std::abs(a0.at(0, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(a0.at(0, 1)) < 1e-15);
  CHECK(std::abs(std::abs(a1.at(0, 1)) - 1.0) < 1e-15);

  // phi = pi with large delta hits regime 2 and the sign(0) := +1 branch.
  const auto [b0, b1] =
      optimal_final_unitaries(FourierAngle(kPi), Significance(0.5));
  CHECK(is_unitary(b0, 1e-12));
  CHECK(is_unitary(b1, 1e-12));

  for (double phi : {0.0, kPi - 1e-9, kPi, kPi + 1e-9, 2 * kPi - 1e-9})
    for (double delta : {0.0, 0.05, 0.3, 0.5, 1.0}) {
      const auto [v0, v1] =
          optimal_final_unitaries(FourierAngle(phi), Significance(delta));
      CHECK(is_unitary(v0, 1e-9));
      CHECK(is_unitary(v1, 1e-9));
    }
}

TEST_CASE("make_strategy bundles Bell input and regime") {
  const CertStrategy s = make_strategy(FourierAngle(0.4), Significance(0.05));
  CHECK(s.regime == Regime::one);
  CHECK(std::abs(s.input_state[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.input_state[3] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(is_unitary(s.v0, 1e-9));
  CHECK(is_unitary(s.v1, 1e-9));
}

TEST_CASE("ideal_p2 fixtures and branches") {
  const Significance d(0.05);
  CHECK(ideal_p2(FourierAngle(0.0), d) == 0.95);  // exact endpoint
  CHECK(ideal_p2(FourierAngle(0.898), d) == doctest::Approx(0.61).epsilon(1e-2));
  CHECK(ideal_p2(FourierAngle(2.696), d) == 0.0);
  CHECK(ideal_p2(FourierAngle(0.8975979010256552), d) ==
        doctest::Approx(0.6101741896885934).epsilon(1e-12));
  // c <= sqrt(delta) branch.
  CHECK(ideal_p2(FourierAngle(kPi), Significance(0.3)) == 0.0);
}

TEST_CASE("ideal_p2 symmetry, endpoints, monotonicity") {
  for (int i = 1; i < 50; ++i) {
    const double phi = 2 * kPi * i / 50.0;
    CHECK(ideal_p2(FourierAngle(phi), Significance(0.07)) ==
          doctest::Approx(ideal_p2(FourierAngle(2 * kPi - phi),
                                   Significance(0.07)))
              .epsilon(1e-12));
  }
  for (double delta : {0.0, 0.1, 0.5, 0.9}) {
    CHECK(ideal_p2(FourierAngle(0.0), Significance(delta)) == 1.0 - delta);
    if (delta > 0)
      CHECK(ideal_p2(FourierAngle(kPi), Significance(delta)) == 0.0);
  }
  for (int i = 0; i < 100; ++i) {
    const double phi = 2 * kPi * i / 99.0;
    double prev = 2.0;
    for (int j = 0; j < 100; ++j) {
      const double delta = j / 99.0;
      const double v = ideal_p2(FourierAngle(phi), Significance(delta));
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("hadamard_ideal_p2") {
  CHECK(hadamard_ideal_p2(0.05) ==
        doctest::Approx(0.2820550528229661).epsilon(1e-14));
  CHECK(hadamard_ideal_p2(0.5) == doctest::Approx(0.0));
  CHECK(hadamard_ideal_p2(0.0) == 0.5);
  CHECK_THROWS_AS(hadamard_ideal_p2(1.5), std::invalid_argument);
}

TEST_CASE("nu_q basics") {
  const QGridConfig cfg{32, 25, 1e-4};
  CHECK(nu_q(identity2(), 0.8, cfg) == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(nu_q(identity2(), 0.0, cfg) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS_AS(nu_q(identity2(), 1.5, cfg), BadQ);
  CHECK_THROWS_AS(nu_q(identity2(), -0.1, cfg), BadQ);

  // Refinement only improves the coarse-grid value.
  const QGridConfig coarse{16, 0, 1e-4};
  const QGridConfig fine{16, 30, 1e-4};
  const Unitary2 a = fourier_unitary(FourierAngle(0.9));
  CHECK(nu_q(a, 0.9, fine) <= nu_q(a, 0.9, coarse) + 1e-15);
}

TEST_CASE("p2_via_qrange agrees with ideal_p2") {
  const QGridConfig cfg{32, 20, 1e-4};
  CHECK(p2_via_qrange(identity2(), Significance(0.05), cfg) ==
        doctest::Approx(0.95).epsilon(1e-3));
  CHECK(p2_via_qrange(fourier_unitary(FourierAngle(0.898)), Significance(0.05),
                      cfg) == doctest::Approx(0.6101741896885934).epsilon(2e-3));

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> uphi(0.0, 2 * kPi);
  std::uniform_real_distribution<double> udelta(0.01, 0.5);
  for (int i = 0; i < 6; ++i) {
    const double phi = uphi(rng), delta = udelta(rng);
    const double via = p2_via_qrange(fourier_unitary(FourierAngle(phi)),
                                     Significance(delta), cfg);
    CHECK(std::abs(via - ideal_p2(FourierAngle(phi), Significance(delta))) <=
          1e-3);
  }

  Unitary2 bad = identity2();
  bad.at(0, 0) = 2.0;
  CHECK_THROWS_AS(p2_via_qrange(bad, Significance(0.05), cfg),
                  NonUnitaryInput);
}
