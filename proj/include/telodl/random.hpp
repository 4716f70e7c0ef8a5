#pragma once

#include <cstdint>
#include <random>

namespace telodl {

/// Source of randomness consumed by the learning rules.  Injected so tests can
/// script every draw.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform real in [0, 1).
  virtual double uniform() = 0;

  /// Uniform integer in [0, n).  n >= 1.
  virtual int pick(int n) = 0;
};

/// mt19937_64 with draw conversions done by hand, so a seed produces the same
/// stream on every standard library.
class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed);

  /// Independent stream number `stream` derived from a master seed.
  static SeededSource for_stream(std::uint64_t master_seed, std::uint64_t stream);

  double uniform() override;
  int pick(int n) override;

 private:
  explicit SeededSource(std::seed_seq& seq);
  std::mt19937_64 engine_;
};

}  // namespace telodl
