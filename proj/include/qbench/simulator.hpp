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
 * Deterministic, seedable two-qubit statevector execution with terminal
 * computational-basis measurement and optional per-qubit readout-error
 * channels.
 *
 * Histogram keys are two characters, "<ancilla bit><target bit>".
 *
 * RNG: per-circuit substreams are derived with SplitMix64 from the run
 * seed mixed with an FNV-1a hash of the circuit key; shot sampling uses
 * std::mt19937_64 on the derived seed, one multinomial draw per circuit
 * (sequential binomial conditioning). Identical (circuit, shots, seed,
 * noise) inputs reproduce bit-identical histograms, independent of batch
 * order.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/circuits.hpp"

namespace qbench {

/// Per-qubit readout confusion matrix. rows[r][t] is the probability of
/// reading bit r given true bit t; each column sums to 1.
struct ReadoutError {
  std::array<std::array<double, 2>, 2> rows{{{1.0, 0.0}, {0.0, 1.0}}};

  void validate() const;
};

struct NoiseModel {
  std::optional<ReadoutError> target;
  std::optional<ReadoutError> ancilla;

  bool empty() const { return !target && !ancilla; }
};

struct Histogram {
  std::map<std::string, std::uint64_t> counts;

  std::uint64_t total() const;
  std::uint64_t at(const std::string &key) const;  // 0 for missing keys
};

struct Seed {
  std::uint64_t value = 0;
};

struct DuplicateKey : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::array<std::string, 4> kOutcomeKeys = {"00", "01", "10", "11"};

/// Born-rule probabilities pushed through the independent per-qubit readout
/// channels. Keys as above; values sum to 1 within 1e-12.
std::map<std::string, double> exact_distribution(
    const Circuit &c, const NoiseModel *noise = nullptr);

/// Multinomial sample of exact_distribution; deterministic in all inputs.
Histogram run(const Circuit &c, std::uint64_t shots, Seed seed,
              const NoiseModel *noise = nullptr);

/// Batched execution; per-circuit seeds derived from (seed, key) so the
/// result does not depend on input order. Throws DuplicateKey.
std::map<std::string, Histogram> run_batch(
    const std::vector<std::pair<std::string, Circuit>> &circuits,
    std::uint64_t shots, Seed seed, const NoiseModel *noise = nullptr);

/// SplitMix64(seed ^ FNV1a(key)): the documented substream derivation.
std::uint64_t derive_substream_seed(Seed seed, const std::string &key);

}  // namespace qbench
