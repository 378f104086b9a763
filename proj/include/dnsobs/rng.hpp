#ifndef DNSOBS_RNG_HPP
#define DNSOBS_RNG_HPP

#include <cassert>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace dnsobs {

// Every randomized routine in this library draws from DetRng. The generator is
// pinned to mt19937_64 and all derived draws (bounded ints, unit doubles,
// shuffles) are implemented here rather than via std::*_distribution, whose
// output is implementation-defined. Configs that carry randomness name the
// algorithm as "mt19937_64".
inline constexpr const char* kRngAlgorithm = "mt19937_64";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and up to two indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(a + 1)) ^ splitmix64(b + 0x632be59bd9b4e019ull));
}

class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// First k entries of a uniform random permutation of [0, n), in draw order.
  std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k) {
    assert(k <= n);
    std::unordered_map<std::size_t, std::size_t> moved;
    moved.reserve(k * 2);
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      auto value_at = [&moved](std::size_t idx) {
        auto it = moved.find(idx);
        return it == moved.end() ? idx : it->second;
      };
      const std::size_t vi = value_at(i);
      const std::size_t vj = value_at(j);
      moved[i] = vj;
      moved[j] = vi;
      out.push_back(vj);
    }
    return out;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dnsobs

#endif
