#ifndef DECOPT_RNG_HPP
#define DECOPT_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace decopt {

// All randomness in a run flows from one 64-bit root seed. Substreams are
// derived by mixing the parent seed with a stream tag, so concurrent workers
// can own independent generators without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::mt19937_64& engine() { return engine_; }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  // uniform integer in [0, bound)
  std::uint64_t next_index(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Deterministic substream id: same (seed, tag) always yields the same stream.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    return mix(seed ^ (0x9e3779b97f4a7c15ULL + tag * 0xbf58476d1ce4e5b9ULL));
  }

 private:
  // splitmix64 finalizer; avoids correlated mt19937_64 states for nearby seeds
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

// Owns the root seed and hands out named substreams.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t root) : root_(root) {}
  Rng stream(std::uint64_t tag) const { return Rng(Rng::derive(root_, tag)); }
  std::uint64_t substream_seed(std::uint64_t tag) const {
    return Rng::derive(root_, tag);
  }
  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
};

}  // namespace decopt

#endif
