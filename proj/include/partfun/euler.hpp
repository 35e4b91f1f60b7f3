#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"

namespace partfun {

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// p(0), ..., p(n), either over Z (integers populated) or over Z/mZ
/// (residues populated).
struct PartitionVector {
  std::optional<u64> modulus;
  std::vector<Integer> integers;
  std::vector<u64> residues;

  std::size_t size() const {
    return modulus ? residues.size() : integers.size();
  }
};

inline constexpr u64 kDefaultVectorBound = 1000000;

/// Euler's pentagonal recurrence. Indices are generated incrementally
/// (g1 += 3k+1, g2 += 3k+2), no multiplications anywhere in the loop.
/// Without a modulus, n is capped by integer_bound to keep memory sane.
inline PartitionVector partition_vector(u64 n, std::optional<u64> modulus = {},
                                        u64 integer_bound = kDefaultVectorBound) {
  PartitionVector out;
  out.modulus = modulus;
  if (modulus) {
    const u64 m = *modulus;
    if (m == 0) throw std::domain_error("partition_vector: modulus must be positive");
    if (m > (u64(1) << 62))
      throw std::domain_error("partition_vector: modulus too large");
    auto& p = out.residues;
    p.assign(n + 1, 0);
    p[0] = 1 % m;
    for (u64 j = 1; j <= n; ++j) {
      u64 acc = 0;
      u64 k = 1, g1 = 1, g2 = 2, d1 = 4, d2 = 5;
      while (g1 <= j) {
        u64 s = p[j - g1];
        if (g2 <= j) {
          s += p[j - g2];
          if (s >= m) s -= m;
        }
        if (k & 1) {
          acc += s;
          if (acc >= m) acc -= m;
        } else {
          acc = acc >= s ? acc - s : acc + m - s;
        }
        g1 += d1;
        g2 += d2;
        d1 += 3;
        d2 += 3;
        ++k;
      }
      p[j] = acc;
    }
  } else {
    if (n > integer_bound)
      throw resource_error("partition_vector: n beyond configured bound; "
                           "pass a modulus or raise the bound");
    auto& p = out.integers;
    p.resize(n + 1);
    p[0] = 1;
    Integer acc;
    for (u64 j = 1; j <= n; ++j) {
      acc = 0;
      u64 k = 1, g1 = 1, g2 = 2, d1 = 4, d2 = 5;
      while (g1 <= j) {
        if (k & 1) {
          acc += p[j - g1];
          if (g2 <= j) acc += p[j - g2];
        } else {
          acc -= p[j - g1];
          if (g2 <= j) acc -= p[j - g2];
        }
        g1 += d1;
        g2 += d2;
        d1 += 3;
        d2 += 3;
        ++k;
      }
      p[j] = acc;
    }
  }
  return out;
}

}  // namespace partfun
