// Copyright 2026 The privlinucb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVLINUCB_RNG_H_
#define PRIVLINUCB_RNG_H_

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cstdint>
#include <random>

namespace privlinucb {

using Rng = std::mt19937_64;

// Boost.Random distributions produce the same streams on every standard
// library, which the replay and byte-identical CSV guarantees rely on.
using NormalDistribution = boost::random::normal_distribution<double>;
using ChiSquaredDistribution = boost::random::chi_squared_distribution<double>;
using UniformRealDistribution = boost::random::uniform_real_distribution<double>;
using UniformIntDistribution = boost::random::uniform_int_distribution<int>;

// Named sub-streams of a run seed. Each consumer owns one so that changing
// how much randomness one component draws never shifts another.
enum class Stream : std::uint64_t {
  kThetaStar = 1,
  kDecisionSets = 2,
  kRewards = 3,
  kNodeNoise = 4,
  kPaddingNoise = 5,
};

// SplitMix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t salt) {
  return MixBits(MixBits(seed) ^ MixBits(salt + 0x632be59bd9b4e019ULL));
}

inline Rng MakeStream(std::uint64_t seed, Stream stream) {
  return Rng(DeriveSeed(seed, static_cast<std::uint64_t>(stream)));
}

}  // namespace privlinucb

#endif  // PRIVLINUCB_RNG_H_
