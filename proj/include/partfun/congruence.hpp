#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "partfun/hrr.hpp"
#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"

namespace partfun {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Weaver certificate (m, l, eps): one special p(n) evaluation that
/// spawns a whole family of congruences p(Ak+B) = 0 mod m.
struct CongruenceTuple {
  u64 m = 0;
  u64 ell = 0;
  int eps = 0;

  friend bool operator==(const CongruenceTuple&, const CongruenceTuple&) = default;
  friend auto operator<=>(const CongruenceTuple&, const CongruenceTuple&) = default;
};

struct CongruenceProgression {
  Integer A;
  Integer B;
  u64 m = 0;
};

namespace detail {

inline bool weaver_m_valid(u64 m) {
  return m == 13 || m == 17 || m == 19 || m == 23 || m == 29 || m == 31;
}

}  // namespace detail

/// Weaver's congruence test for the pair (m, l): evaluates p at the
/// special index m*r_m*(l^2-1)/24 + delta_m and classifies the residue.
/// Returns the tuple on success, nullopt for not-a-congruence.
inline std::optional<CongruenceTuple> weaver_test(u64 m, u64 ell) {
  if (!detail::weaver_m_valid(m))
    throw std::domain_error("weaver_test: m must be a prime in 13..31");
  if (ell < 5 || ell == m || !is_prime(ell))
    throw std::domain_error("weaver_test: l must be a prime >= 5, l != m");

  const u64 delta_m = mod_inv(24, m);
  const u64 r_m = (24 - m % 24) % 24;
  const u64 v = (m - 3) / 2;

  const u64 x = mpz_fdiv_ui(
      partition_hrr(Integer(static_cast<unsigned long>(delta_m))).value.get_mpz_t(),
      m);
  Integer ell_z(static_cast<unsigned long>(ell));
  Integer idx = Integer(static_cast<unsigned long>(m)) *
                    static_cast<unsigned long>(r_m) * ((ell_z * ell_z - 1) / 24) +
                static_cast<unsigned long>(delta_m);
  const u64 y = mpz_fdiv_ui(partition_hrr(idx).value.get_mpz_t(), m);

  const i64 rm_signed = (v & 1) ? -static_cast<i64>(r_m) : static_cast<i64>(r_m);
  const int f = jacobi(3, ell) * jacobi(rm_signed, ell);
  const u64 lpow = pow_mod(ell % m, v - 1, m);
  const i64 fx = f * static_cast<i64>(mul_mod(x, lpow, m));  // in (-m, m)
  const u64 t = (y + static_cast<u64>(fx + static_cast<i64>(m))) % m;

  int omega;
  if (t == 0)
    omega = 0;
  else if (t == 1)
    omega = 1;
  else if (t == m - 1)
    omega = -1;
  else
    return std::nullopt;

  const int eps = omega * jacobi((v & 1) ? -3 : 3, ell);
  return CongruenceTuple{m, ell, eps};
}

namespace detail {

// A = m l^(4-|eps|), alpha the unique solution of
// m l^(3-|eps|) alpha = -1 mod 24 with 1 <= alpha < 24.
struct TupleExpansion {
  Integer A;
  Integer mle3;  // m l^(3-|eps|)
  u64 alpha = 0;
};

inline TupleExpansion expand_base(const CongruenceTuple& t) {
  TupleExpansion e;
  unsigned ae = static_cast<unsigned>(t.eps < 0 ? -t.eps : t.eps);
  Integer lp;
  mpz_ui_pow_ui(lp.get_mpz_t(), t.ell, 3 - ae);
  e.mle3 = lp * static_cast<unsigned long>(t.m);
  e.A = e.mle3 * static_cast<unsigned long>(t.ell);
  u64 c = mpz_fdiv_ui(e.mle3.get_mpz_t(), 24);
  e.alpha = 24 - mod_inv(static_cast<i64>(c), 24);
  return e;
}

}  // namespace detail

/// Progression for one admissible delta, or nullopt when delta fails
/// the eps-condition (22).
inline std::optional<CongruenceProgression> progression_for_delta(
    const CongruenceTuple& t, u64 delta) {
  if (delta >= t.ell) throw std::domain_error("progression_for_delta: delta < l");
  auto base = detail::expand_base(t);
  u64 c = (mul_mod(24 % t.ell, delta, t.ell) + base.alpha) % t.ell;
  if (t.eps == 0) {
    if (c == 0) return std::nullopt;
  } else {
    if (jacobi(static_cast<i64>(c), t.ell) != t.eps) return std::nullopt;
  }
  CongruenceProgression prog;
  prog.m = t.m;
  prog.A = base.A;
  prog.B = (base.mle3 * static_cast<unsigned long>(base.alpha) + 1) / 24 +
           base.mle3 * static_cast<unsigned long>(delta);
  return prog;
}

/// All progressions of a tuple: l-1 of them for eps = 0, (l-1)/2 for
/// eps = +-1.
inline std::vector<CongruenceProgression> expand_tuple(const CongruenceTuple& t) {
  std::vector<CongruenceProgression> out;
  out.reserve(t.eps == 0 ? t.ell - 1 : (t.ell - 1) / 2);
  for (u64 delta = 0; delta < t.ell; ++delta) {
    if (auto p = progression_for_delta(t, delta)) out.push_back(std::move(*p));
  }
  return out;
}

/// Check p(A k + B) = 0 mod m for all 0 <= k <= k_max.
inline bool verify_progression(const CongruenceProgression& prog, long k_max) {
  if (k_max < 0) throw std::domain_error("verify_progression: k_max must be >= 0");
  for (long k = 0; k <= k_max; ++k) {
    Integer idx = prog.A * static_cast<unsigned long>(k) + prog.B;
    if (mpz_fdiv_ui(partition_hrr(idx).value.get_mpz_t(), prog.m) != 0)
      return false;
  }
  return true;
}

/// Streamed prime enumeration over [lo, hi] by a segmented sieve.
template <typename F>
inline void for_primes_in(u64 lo, u64 hi, F&& fn) {
  if (hi < lo || hi < 2) return;
  lo = std::max<u64>(lo, 2);
  u64 root = 2;
  while (root * root < hi + 1) ++root;
  std::vector<u64> base;
  {
    std::vector<bool> comp(root + 1, false);
    for (u64 p = 2; p <= root; ++p) {
      if (comp[p]) continue;
      base.push_back(p);
      for (u64 q = p * p; q <= root; q += p) comp[q] = true;
    }
  }
  constexpr u64 kSegment = 1 << 16;
  std::vector<bool> seg;
  for (u64 start = lo; start <= hi; start += kSegment) {
    u64 end = std::min(hi, start + kSegment - 1);
    seg.assign(end - start + 1, true);
    for (u64 p : base) {
      if (p * p > end) break;
      u64 first = std::max(p * p, (start + p - 1) / p * p);
      for (u64 q = first; q <= end; q += p) seg[q - start] = false;
    }
    for (u64 v = start; v <= end; ++v) {
      if (v >= 2 && seg[v - start]) fn(v);
    }
  }
}

struct SearchOptions {
  unsigned jobs = 1;
  std::function<void(const CongruenceTuple&)> on_hit;  // called in l order
};

namespace detail {

struct CheckpointState {
  std::set<CongruenceTuple> tuples;
  u64 last_ell = 0;
};

inline CheckpointState read_checkpoint(const std::string& path) {
  CheckpointState st;
  std::ifstream in(path);
  if (!in) return st;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("last l=");
      if (pos != std::string::npos) {
        u64 v = std::strtoull(line.c_str() + pos + 7, nullptr, 10);
        st.last_ell = std::max(st.last_ell, v);
      }
      continue;
    }
    std::istringstream ss(line);
    CongruenceTuple t;
    long long e;
    if (ss >> t.m >> t.ell >> e) {
      t.eps = static_cast<int>(e);
      st.tuples.insert(t);
    }
  }
  return st;
}

}  // namespace detail

/// Weaver-tuple search over primes l in [lo, hi], resumable through an
/// append-only checkpoint file (`m l eps` per hit plus `# last l=..`
/// progress lines). Returns every tuple for this m in range, including
/// ones recovered from the checkpoint.
inline std::vector<CongruenceTuple> search(u64 m, u64 lo, u64 hi,
                                           const std::string& checkpoint_path,
                                           const SearchOptions& opts = {}) {
  if (!detail::weaver_m_valid(m))
    throw std::domain_error("search: m must be a prime in 13..31");
  auto st = detail::read_checkpoint(checkpoint_path);
  std::ofstream out(checkpoint_path, std::ios::app);
  if (!out) throw io_error("search: cannot open checkpoint for append");

  u64 start = std::max(lo, u64(5));
  if (st.last_ell >= start) start = st.last_ell + 1;

  std::vector<u64> primes;
  for_primes_in(start, hi, [&](u64 p) {
    if (p >= 5 && p != m) primes.push_back(p);
  });

  const unsigned jobs = std::max(1u, opts.jobs);
  constexpr std::size_t kBlock = 64;
  for (std::size_t b0 = 0; b0 < primes.size(); b0 += kBlock) {
    const std::size_t b1 = std::min(primes.size(), b0 + kBlock);
    std::vector<std::optional<CongruenceTuple>> found(b1 - b0);
    if (jobs <= 1 || b1 - b0 == 1) {
      for (std::size_t i = b0; i < b1; ++i) found[i - b0] = weaver_test(m, primes[i]);
    } else {
      std::atomic<std::size_t> next{b0};
      auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < b1;)
          found[i - b0] = weaver_test(m, primes[i]);
      };
      std::vector<std::thread> pool;
      for (unsigned j = 0; j < std::min<std::size_t>(jobs, b1 - b0); ++j)
        pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (auto& f : found) {
      if (!f) continue;
      st.tuples.insert(*f);
      out << f->m << ' ' << f->ell << ' ' << f->eps << '\n';
      if (opts.on_hit) opts.on_hit(*f);
    }
    out << "# last l=" << primes[b1 - 1] << '\n';
    out.flush();
    if (!out) throw io_error("search: checkpoint write failed");
  }
  if (!primes.empty() || st.last_ell < hi) {
    out << "# last l=" << hi << '\n';
    out.flush();
  }

  std::vector<CongruenceTuple> result;
  for (const auto& t : st.tuples) {
    if (t.m == m && t.ell >= lo && t.ell <= hi) result.push_back(t);
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.ell < b.ell; });
  return result;
}

}  // namespace partfun
