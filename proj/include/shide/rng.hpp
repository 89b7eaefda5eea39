#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace shide {

namespace detail {

//! SplitMix64 finalizer; full-avalanche mix of a 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace detail

//! Derives one stream seed from a base seed and a list of labels
//! (model index, sample size, replication, stream id, ...) by folding
//! each label through the SplitMix64 avalanche. Used so that every
//! (model, n, rep) cell of a benchmark owns independent, reproducible
//! streams regardless of execution order.
inline std::uint64_t mix_seed(std::uint64_t base,
                              std::initializer_list<std::uint64_t> labels)
{
  std::uint64_t s = base;
  std::uint64_t out = detail::splitmix64(s);
  for (std::uint64_t v : labels) {
    s = out ^ (v + 0x9E3779B97F4A7C15ULL);
    out = detail::splitmix64(s);
  }
  return out;
}

//! xoshiro256++ generator seeded via SplitMix64.
//!
//! Hand-rolled so that identical seeds give identical streams on every
//! platform and standard library; std:: distributions make no such
//! guarantee. Not thread-safe: use one generator per worker.
class Rng
{
public:
  explicit Rng(std::uint64_t seed = 0)
  {
    std::uint64_t s = seed;
    for (auto& w : state_)
      w = detail::splitmix64(s);
  }

  std::uint64_t next_u64()
  {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  //! Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  //! Uniform on [a, b).
  double uniform(double a, double b) { return a + uniform01() * (b - a); }

  //! Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal()
  {
    const double u1 = 1.0 - uniform01(); // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  //! Exponential(rate 1), strictly positive.
  double exponential()
  {
    double e;
    do {
      e = -std::log(1.0 - uniform01());
    } while (e <= 0.0);
    return e;
  }

  //! Standard Cauchy.
  double cauchy() { return std::tan(3.14159265358979323846 * (uniform01() - 0.5)); }

private:
  static std::uint64_t rotl(std::uint64_t x, int k)
  {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

} // namespace shide
