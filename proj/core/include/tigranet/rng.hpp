#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tigranet {

/// 64-bit generator with portable uniform draws. The standard distributions
/// are implementation-defined, so draws are derived from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive), rejection-sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double normal();

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives independent, reproducible streams from one master seed.
/// Stream names used by the tool: "dataset", "init", "shuffle", "eval-transforms".
class SeedSplitter {
 public:
  explicit SeedSplitter(std::uint64_t master) : master_(master) {}

  std::uint64_t master() const { return master_; }
  std::uint64_t derive(std::string_view stream) const;
  Rng stream(std::string_view name) const { return Rng(derive(name)); }

 private:
  std::uint64_t master_;
};

}  // namespace tigranet
