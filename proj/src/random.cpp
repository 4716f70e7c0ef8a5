#include "telodl/random.hpp"

#include <limits>

namespace telodl {

namespace {

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

SeededSource::SeededSource(std::uint64_t seed) {
  std::seed_seq seq{lo32(seed), hi32(seed)};
  engine_.seed(seq);
}

SeededSource::SeededSource(std::seed_seq& seq) : engine_(seq) {}

SeededSource SeededSource::for_stream(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{lo32(master_seed), hi32(master_seed), lo32(stream), hi32(stream), 0x7e1u};
  return SeededSource(seq);
}

double SeededSource::uniform() {
  // 53 high bits -> [0,1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int SeededSource::pick(int n) {
  const auto range = static_cast<std::uint64_t>(n);
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<int>(x % range);
}

}  // namespace telodl
