#pragma once

// Seedable random source with explicit substreams. One RandomSource per Monte
// Carlo replicate; substream_seed derives independent seeds from a master seed
// so studies are reproducible under any execution order.

#include <cstdint>

#include <random>

namespace nvmix {

// splitmix64 finalizer applied twice; distinct (master, index) pairs map to
// well-separated seeds.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  // 53-bit uniform on the open interval (0, 1).
  double uniform01();

  // Standard normal via the polar method; caches the spare deviate.
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0, with the boost step for
  // shape < 1.
  double gamma_draw(double shape);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nvmix
