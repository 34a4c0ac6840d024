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

#include <algorithm>
#include <cmath>

#include "qbench/simulator.hpp"
#include "test_util.hpp"

using namespace qbench;

namespace {

NoiseModel example_readout_noise() {
  // ReadoutError([[0.75, 0.25], [0.8, 0.2]]) on both qubits: given true 0
  // read (0.75, 0.25); given true 1 read (0.8, 0.2).
  ReadoutError e;
  e.rows = {{{0.75, 0.8}, {0.25, 0.2}}};
  NoiseModel nm;
  nm.target = e;
  nm.ancilla = e;
  return nm;
}

Circuit random_circuit(std::mt19937_64 &rng) {
  Circuit c;
  c.append(Raw1Gate{testutil::random_unitary2(rng), QubitRole::target});
  c.append(CXGate{QubitRole::target, QubitRole::ancilla});
  c.append(Raw1Gate{testutil::random_unitary2(rng), QubitRole::ancilla});
  return c;
}

}  // namespace

TEST_CASE("exact_distribution examples") {
  const auto bell = exact_distribution(bell_prep());
  CHECK(bell.at("00") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bell.at("11") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bell.at("01") == doctest::Approx(0.0).epsilon(1e-12));

  Circuit h;
  h.append(HGate{QubitRole::target});
  const auto plus = exact_distribution(h);
  CHECK(plus.at("00") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plus.at("01") == doctest::Approx(0.5).epsilon(1e-12));

  const NoiseModel nm = example_readout_noise();
  const auto noisy = exact_distribution(bell_prep(), &nm);
  CHECK(noisy.at("00") == doctest::Approx(0.60125).epsilon(1e-12));
}

TEST_CASE("exact_distribution sums to 1") {
  std::mt19937_64 rng(41);
  const NoiseModel nm = example_readout_noise();
  for (int i = 0; i < 1000; ++i) {
    const Circuit c = random_circuit(rng);
    for (const NoiseModel *noise : {static_cast<const NoiseModel *>(nullptr),
                                    &nm}) {
      double sum = 0;
      for (const auto &[k, v] : exact_distribution(c, noise)) sum += v;
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("identity noise leaves the distribution bitwise unchanged") {
  std::mt19937_64 rng(43);
  NoiseModel ident;
  ident.target = ReadoutError{};
  ident.ancilla = ReadoutError{};
  for (int i = 0; i < 50; ++i) {
    const Circuit c = random_circuit(rng);
    const auto a = exact_distribution(c);
    const auto b = exact_distribution(c, &ident);
    CHECK(a == b);
  }
}

TEST_CASE("run: key convention and determinism") {
  Circuit x;
  x.append(XGate{QubitRole::target});
  const Histogram h = run(x, 100, Seed{5});
  CHECK(h.at("01") == 100);  // target is the right character
  CHECK(h.total() == 100);

  const Histogram a = run(bell_prep(), 5000, Seed{42});
  const Histogram b = run(bell_prep(), 5000, Seed{42});
  CHECK(a.counts == b.counts);
  const Histogram c = run(bell_prep(), 5000, Seed{43});
  CHECK(a.counts != c.counts);
}

TEST_CASE("run: Bell statistics at one million shots") {
  const Histogram h = run(bell_prep(), 1000000, Seed{7});
  const double bound = 3.0 * std::sqrt(0.25 * 1000000);
  CHECK(std::abs(static_cast<double>(h.at("00")) - 500000.0) < bound);
  CHECK(std::abs(static_cast<double>(h.at("11")) - 500000.0) < bound);
  CHECK(h.at("01") == 0);
  CHECK(h.at("10") == 0);
}

TEST_CASE("sampling matches exact distribution within 4 sigma") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 20; ++i) {
    const Circuit c = random_circuit(rng);
    const auto p = exact_distribution(c);
    const std::uint64_t shots = 100000;
    const Histogram h = run(c, shots, Seed{100 + static_cast<std::uint64_t>(i)});
    for (const auto &key : kOutcomeKeys) {
      const double expected = p.at(key) * shots;
      const double sigma =
          std::sqrt(std::max(p.at(key) * (1 - p.at(key)) * shots, 1.0));
      CHECK(std::abs(static_cast<double>(h.at(key)) - expected) <= 4 * sigma);
    }
  }
}

TEST_CASE("run_batch: keyed, order-independent, duplicate-checked") {
  std::mt19937_64 rng(53);
  const Circuit c0 = random_circuit(rng);
  const Circuit c1 = random_circuit(rng);

  const auto fwd = run_batch({{"u_v0", c0}, {"u_v1", c1}}, 2000, Seed{9});
  const auto rev = run_batch({{"u_v1", c1}, {"u_v0", c0}}, 2000, Seed{9});
  CHECK(fwd.size() == 2);
  CHECK(fwd.at("u_v0").counts == rev.at("u_v0").counts);
  CHECK(fwd.at("u_v1").counts == rev.at("u_v1").counts);

  // A batch entry equals a standalone run on the derived substream seed.
  const Histogram solo =
      run(c0, 2000, Seed{derive_substream_seed(Seed{9}, "u_v0")});
  CHECK(solo.counts == fwd.at("u_v0").counts);

  CHECK(run_batch({}, 10, Seed{1}).empty());
  CHECK_THROWS_AS(run_batch({{"k", c0}, {"k", c1}}, 10, Seed{1}),
                  DuplicateKey);
}

TEST_CASE("readout error validation") {
  ReadoutError bad;
  bad.rows = {{{0.5, 0.3}, {0.4, 0.7}}};  // first column sums to 0.9
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ReadoutError ok;
  ok.rows = {{{0.75, 0.8}, {0.25, 0.2}}};
  CHECK_NOTHROW(ok.validate());
}
