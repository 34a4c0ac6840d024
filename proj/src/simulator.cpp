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

#include "qbench/simulator.hpp"

#include <random>

namespace qbench {

namespace {

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::array<double, 4> ideal_probabilities(const Circuit &c) {
  Ket4 psi = apply(circuit_unitary(c), basis_ket4(0));
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = std::norm(psi[i]);
  return p;
}

std::array<double, 4> push_through_noise(const std::array<double, 4> &p,
                                         const NoiseModel &noise) {
  auto channel = [](const std::optional<ReadoutError> &e, std::size_t read,
                    std::size_t truth) {
    if (!e) return read == truth ? 1.0 : 0.0;
    return e->rows[read][truth];
  };
  if (noise.target) noise.target->validate();
  if (noise.ancilla) noise.ancilla->validate();
  std::array<double, 4> q{};
  for (std::size_t a2 = 0; a2 < 2; ++a2)
    for (std::size_t t2 = 0; t2 < 2; ++t2)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t t = 0; t < 2; ++t)
          q[2 * a2 + t2] += channel(noise.ancilla, a2, a) *
                            channel(noise.target, t2, t) * p[2 * a + t];
  return q;
}

std::array<double, 4> distribution_array(const Circuit &c,
                                         const NoiseModel *noise) {
  std::array<double, 4> p = ideal_probabilities(c);
  if (noise && !noise->empty()) p = push_through_noise(p, *noise);
  return p;
}

Histogram sample_multinomial(const std::array<double, 4> &p,
                             std::uint64_t shots, std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  Histogram h;
  std::uint64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    std::uint64_t n = 0;
    if (i == 3) {
      n = remaining;
    } else if (remaining > 0 && mass > 0) {
      double cond = std::min(1.0, std::max(0.0, p[i] / mass));
      std::binomial_distribution<std::uint64_t> bin(remaining, cond);
      n = bin(rng);
    }
    if (n > 0) h.counts[kOutcomeKeys[i]] = n;
    remaining -= n;
    mass -= p[i];
  }
  return h;
}

}  // namespace

void ReadoutError::validate() const {
  for (std::size_t t = 0; t < 2; ++t) {
    double col = 0;
    for (std::size_t r = 0; r < 2; ++r) {
      if (rows[r][t] < 0.0 || rows[r][t] > 1.0)
        throw std::invalid_argument("ReadoutError: entries must lie in [0,1]");
      col += rows[r][t];
    }
    if (std::abs(col - 1.0) > 1e-12)
      throw std::invalid_argument("ReadoutError: columns must sum to 1");
  }
}

std::uint64_t Histogram::total() const {
  std::uint64_t n = 0;
  for (const auto &[k, v] : counts) n += v;
  return n;
}

std::uint64_t Histogram::at(const std::string &key) const {
  auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

std::map<std::string, double> exact_distribution(const Circuit &c,
                                                 const NoiseModel *noise) {
  std::array<double, 4> p = distribution_array(c, noise);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < 4; ++i) out[kOutcomeKeys[i]] = p[i];
  return out;
}

std::uint64_t derive_substream_seed(Seed seed, const std::string &key) {
  return splitmix64(seed.value ^ fnv1a(key));
}

Histogram run(const Circuit &c, std::uint64_t shots, Seed seed,
              const NoiseModel *noise) {
  if (shots < 1) throw std::invalid_argument("run: shots must be >= 1");
  return sample_multinomial(distribution_array(c, noise), shots,
                            splitmix64(seed.value));
}

std::map<std::string, Histogram> run_batch(
    const std::vector<std::pair<std::string, Circuit>> &circuits,
    std::uint64_t shots, Seed seed, const NoiseModel *noise) {
  std::map<std::string, Histogram> out;
  for (const auto &[key, circuit] : circuits) {
    if (out.count(key)) throw DuplicateKey("run_batch: duplicate key " + key);
    out[key] = run(circuit, shots, Seed{derive_substream_seed(seed, key)},
                   noise);
  }
  return out;
}

}  // namespace qbench
