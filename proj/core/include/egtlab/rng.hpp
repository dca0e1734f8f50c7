#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace egt {

/// Seedable generator with a platform-independent stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Seeding goes through std::seed_seq (also fully specified), and
/// every derived quantity (uniforms, bounded integers, exponentials) is
/// computed here rather than through the implementation-defined
/// <random> distributions, so a (seed, stream) pair yields the same draws
/// with any conforming standard library.
class Rng {
 public:
  static constexpr std::string_view kGeneratorId = "mt19937_64+seed_seq(seed,stream)/v1";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent stream for work item `index` under a master seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed, index); }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_positive();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Unit-rate exponential.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace egt
