#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bcf {

// Purposes that consume randomness. Each (role, index) pair selects an
// independent stream under one master seed, so work can be scheduled in any
// order without changing results.
enum class StreamRole : std::uint32_t {
  kGeneral = 0,
  kBaseTree = 1,
  kShadowTree = 2,
  kTrainingData = 3,
  kTestSet = 4,
  kTestLabels = 5,
  kReplication = 6,
  kFold = 7,
  kFoldShuffle = 8,
  kVarianceRepeat = 9,
  kTestNoise = 10,
};

// xoshiro256** seeded through SplitMix64. All derived quantities (uniform
// doubles, bounded integers, normals) are computed here rather than through
// <random> distributions, whose output differs between standard libraries.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  result_type next();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer on [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Master seed for a family of streams.
struct RngSpec {
  std::uint64_t master_seed = 0;

  // Spec for a nested experiment component (e.g. replication r), itself a
  // family of streams.
  [[nodiscard]] RngSpec child(StreamRole role, std::uint64_t index) const;
};

RandomStream derive_stream(const RngSpec& spec, std::uint64_t index);
RandomStream derive_stream(const RngSpec& spec, StreamRole role, std::uint64_t index);

}  // namespace bcf
