// Command-line driver: isolated p(n) values, partition vectors,
// exponential-sum cross-checks, benchmarks, and the Weaver congruence
// search.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "partfun/partfun.hpp"

namespace {

using partfun::Integer;
using partfun::u64;
using json = nlohmann::json;

// Exit codes: 0 success, 1 usage/domain error, 2 internal
// disagreement, 3 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDisagreement = 2;
constexpr int kExitIo = 3;

// Nonnegative integer, plain decimal or exact scientific shorthand
// ("1e12" = 10^12, "25e4" = 250000). Never parsed through floating
// point.
std::optional<Integer> parse_big(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  Integer v;
  if (mpz_set_str(v.get_mpz_t(), mant.c_str(), 10) != 0) return std::nullopt;
  if (epos != std::string::npos) {
    std::string es = s.substr(epos + 1);
    if (es.empty() || es.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    unsigned long ex = std::strtoul(es.c_str(), nullptr, 10);
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, ex);
    v *= p10;
  }
  return v;
}

std::ostream& open_dest(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw partfun::io_error("cannot open output file: " + path);
  return file;
}

int cmd_pn(const std::string& n_str, bool digits, int head, int tail,
           const std::string& mod_str, bool as_json, bool stats,
           const std::string& out_path, bool force_arb) {
  auto n = parse_big(n_str);
  if (!n) {
    std::cerr << "pn: cannot parse n: " << n_str << "\n";
    return kExitUsage;
  }
  partfun::HrrStats st;
  partfun::HrrOptions opts;
  opts.stats = &st;
  opts.force_arb = force_arb;
  auto res = partfun::partition_hrr(*n, opts);

  std::ofstream file;
  std::ostream& out = open_dest(file, out_path);

  std::optional<u64> mod;
  if (!mod_str.empty()) {
    auto m = parse_big(mod_str);
    if (!m || *m == 0 || !m->fits_ulong_p()) {
      std::cerr << "pn: bad modulus: " << mod_str << "\n";
      return kExitUsage;
    }
    mod = m->get_ui();
  }

  std::string dec;
  std::size_t ndigits = 0;
  const bool wants_text = !mod || as_json;
  if (wants_text) {
    dec = res.value.get_str();
    ndigits = dec.size();
  }

  if (as_json) {
    json j;
    j["n"] = n_str;
    j["digits"] = ndigits;
    j["terms"] = res.terms_used;
    j["residual"] = res.residual;
    j["time_s"] = st.total_seconds;
    if (head > 0) j["head"] = dec.substr(0, head);
    if (tail > 0) j["tail"] = dec.substr(dec.size() - std::min<std::size_t>(tail, dec.size()));
    if (mod) j["residue"] = mpz_fdiv_ui(res.value.get_mpz_t(), *mod);
    if (head <= 0 && tail <= 0 && !mod) j["value"] = dec;
    out << j.dump() << "\n";
    return kExitOk;
  }

  if (mod) {
    out << mpz_fdiv_ui(res.value.get_mpz_t(), *mod) << "\n";
  } else if (head > 0 || tail > 0) {
    std::string line;
    if (head > 0) line += dec.substr(0, head);
    line += "...";
    if (tail > 0)
      line += dec.substr(dec.size() - std::min<std::size_t>(tail, dec.size()));
    if (digits) line += ", " + std::to_string(ndigits) + " digits";
    out << line << "\n";
  } else if (digits) {
    out << ndigits << "\n";
  } else {
    out << dec << "\n";
  }
  if (stats) {
    out << "# N=" << res.terms_used << " residual=" << res.residual
        << " time=" << st.total_seconds << "s\n";
  }
  return kExitOk;
}

int cmd_vector(const std::string& n_str, const std::string& mod_str, u64 limit,
               const std::string& out_path) {
  auto n = parse_big(n_str);
  if (!n || !n->fits_ulong_p()) {
    std::cerr << "vector: cannot parse n: " << n_str << "\n";
    return kExitUsage;
  }
  std::optional<u64> mod;
  if (!mod_str.empty()) {
    auto m = parse_big(mod_str);
    if (!m || *m == 0 || !m->fits_ulong_p()) {
      std::cerr << "vector: bad modulus: " << mod_str << "\n";
      return kExitUsage;
    }
    mod = m->get_ui();
  }
  auto pv = partfun::partition_vector(n->get_ui(), mod, limit);
  std::ofstream file;
  std::ostream& out = open_dest(file, out_path);
  if (mod) {
    for (u64 r : pv.residues) out << r << "\n";
  } else {
    for (const auto& v : pv.integers) out << v.get_str() << "\n";
  }
  return kExitOk;
}

std::string render_factorization(const partfun::TermFactorization& f) {
  if (f.zero) return "0";
  std::string s = f.sign < 0 ? "-" : "+";
  s += "sqrt(" + std::to_string(f.surd_num) + "/" + std::to_string(f.surd_den) + ")";
  for (const auto& a : f) {
    s += " * cos(" + std::to_string(a.p) + "*pi/" + std::to_string(a.q) + ")";
  }
  return s;
}

int cmd_ak(const std::string& k_str, const std::string& n_str) {
  auto kz = parse_big(k_str);
  auto n = parse_big(n_str);
  if (!kz || !n || *kz == 0 || !kz->fits_ulong_p()) {
    std::cerr << "ak: bad arguments\n";
    return kExitUsage;
  }
  u64 k = kz->get_ui();
  partfun::NumericContext ctx(128);
  partfun::Real a = partfun::ak_naive(k, *n, ctx);
  partfun::Real b = partfun::ak_selberg(k, *n, ctx);
  auto fac = partfun::ak_factor(k, *n);
  partfun::Real c = partfun::term_factorization_value(fac, ctx);
  std::printf("naive    %s\n", a.str(25).c_str());
  std::printf("selberg  %s\n", b.str(25).c_str());
  std::printf("factored %s\n", c.str(25).c_str());
  std::printf("symbolic %s\n", render_factorization(fac).c_str());

  // flag any pairwise disagreement beyond 2^-40 relative
  auto close = [&](const partfun::Real& x, const partfun::Real& y) {
    partfun::Real d(128);
    mpfr_sub(d.raw(), x.raw(), y.raw(), MPFR_RNDN);
    mpfr_abs(d.raw(), d.raw(), MPFR_RNDN);
    partfun::Real scale(128);
    mpfr_abs(scale.raw(), x.raw(), MPFR_RNDN);
    if (mpfr_cmp_d(scale.raw(), 1.0) < 0) mpfr_set_ui(scale.raw(), 1, MPFR_RNDN);
    mpfr_div(d.raw(), d.raw(), scale.raw(), MPFR_RNDN);
    return mpfr_cmp_d(d.raw(), std::ldexp(1.0, -40)) <= 0;
  };
  if (!close(a, b) || !close(a, c)) {
    std::fprintf(stderr, "ak: paths disagree beyond 2^-40\n");
    return kExitDisagreement;
  }
  return kExitOk;
}

int cmd_bench(const std::vector<std::string>& n_strs, int reps) {
  std::printf("%-12s %12s %12s %12s\n", "n", "time_s", "terms", "first_frac");
  for (const auto& s : n_strs) {
    auto n = parse_big(s);
    if (!n) {
      std::cerr << "bench: cannot parse " << s << "\n";
      return kExitUsage;
    }
    partfun::HrrStats best{};
    u64 terms = 0;
    for (int i = 0; i < std::max(reps, 1); ++i) {
      partfun::HrrStats st;
      partfun::HrrOptions o;
      o.stats = &st;
      auto r = partfun::partition_hrr(*n, o);
      terms = r.terms_used;
      if (i == 0 || st.total_seconds < best.total_seconds) best = st;
    }
    std::printf("%-12s %12.6f %12llu %12.3f\n", s.c_str(), best.total_seconds,
                static_cast<unsigned long long>(terms),
                best.total_seconds > 0
                    ? best.first_term_seconds / best.total_seconds
                    : 0.0);
    std::fflush(stdout);
  }
  return kExitOk;
}

int cmd_congruence_search(u64 m, u64 lmin, u64 lmax, const std::string& out_file,
                          unsigned jobs, bool as_json) {
  partfun::SearchOptions opts;
  opts.jobs = jobs;
  opts.on_hit = [&](const partfun::CongruenceTuple& t) {
    if (as_json) {
      json j{{"m", t.m}, {"l", t.ell}, {"eps", t.eps}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << t.m << " " << t.ell << " " << t.eps << "\n";
    }
    std::cout.flush();
  };
  auto tuples = partfun::search(m, lmin, lmax, out_file, opts);
  std::cerr << "# " << tuples.size() << " tuples for m=" << m << " in ["
            << lmin << ", " << lmax << "]\n";
  return kExitOk;
}

int cmd_congruence_verify(const std::string& a_str, const std::string& b_str,
                          u64 m, long kmax) {
  auto A = parse_big(a_str);
  auto B = parse_big(b_str);
  if (!A || !B) {
    std::cerr << "verify: bad A/B\n";
    return kExitUsage;
  }
  partfun::CongruenceProgression prog{*A, *B, m};
  bool ok = partfun::verify_progression(prog, kmax);
  std::cout << (ok ? "true" : "false") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partition function via the Hardy-Ramanujan-Rademacher series"};
  app.require_subcommand(1);

  // pn
  std::string pn_n, pn_mod, pn_out;
  bool pn_digits = false, pn_json = false, pn_stats = false, pn_arb = false;
  int pn_head = 0, pn_tail = 0;
  auto* pn = app.add_subcommand("pn", "compute a single p(n)");
  pn->add_option("n", pn_n, "index n (decimal or 1e12 shorthand)")->required();
  pn->add_flag("--digits", pn_digits, "print the decimal digit count");
  pn->add_option("--head", pn_head, "print leading digits");
  pn->add_option("--tail", pn_tail, "print trailing digits");
  pn->add_option("--mod", pn_mod, "print p(n) mod M only");
  pn->add_flag("--json", pn_json, "JSON output");
  pn->add_flag("--stats", pn_stats, "append N/residual/time");
  pn->add_flag("--force-arb", pn_arb, "disable the hardware-double tail");
  pn->add_option("--out", pn_out, "write to file instead of stdout");

  // vector
  std::string vec_n, vec_mod, vec_out;
  u64 vec_limit = partfun::kDefaultVectorBound;
  auto* vec = app.add_subcommand("vector", "stream p(0..n), one per line");
  vec->add_option("n", vec_n)->required();
  vec->add_option("--mod", vec_mod, "reduce modulo M");
  vec->add_option("--limit", vec_limit, "memory bound for the integer mode");
  vec->add_option("--out", vec_out, "write to file instead of stdout");

  // ak
  std::string ak_k, ak_n;
  auto* ak = app.add_subcommand("ak", "A_k(n) by all three algorithms");
  ak->add_option("k", ak_k)->required();
  ak->add_option("n", ak_n)->required();

  // bench
  std::vector<std::string> bench_ns;
  int bench_reps = 1;
  auto* bench = app.add_subcommand("bench", "timing table over a list of n");
  bench->add_option("n", bench_ns, "indices to time")->required();
  bench->add_option("--reps", bench_reps, "repetitions (best-of)");

  // congruence
  auto* cong = app.add_subcommand("congruence", "Weaver congruences");
  cong->require_subcommand(1);
  u64 cs_m = 13, cs_lmin = 5, cs_lmax = 1000;
  unsigned cs_jobs = 1;
  bool cs_json = false;
  std::string cs_out;
  auto* cs = cong->add_subcommand("search", "search tuples over primes l");
  cs->add_option("--m", cs_m, "prime in {13,17,19,23,29,31}")->required();
  cs->add_option("--lmin", cs_lmin)->required();
  cs->add_option("--lmax", cs_lmax)->required();
  cs->add_option("--out", cs_out, "checkpoint file (append, resumable)")->required();
  cs->add_option("--jobs", cs_jobs, "worker threads");
  cs->add_flag("--json", cs_json, "emit hits as JSON records");

  std::string cv_a, cv_b;
  u64 cv_m = 13;
  long cv_kmax = 0;
  auto* cv = cong->add_subcommand("verify", "check p(Ak+B) = 0 mod m");
  cv->add_option("--A", cv_a)->required();
  cv->add_option("--B", cv_b)->required();
  cv->add_option("--m", cv_m)->required();
  cv->add_option("--kmax", cv_kmax)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pn->parsed())
      return cmd_pn(pn_n, pn_digits, pn_head, pn_tail, pn_mod, pn_json,
                    pn_stats, pn_out, pn_arb);
    if (vec->parsed()) return cmd_vector(vec_n, vec_mod, vec_limit, vec_out);
    if (ak->parsed()) return cmd_ak(ak_k, ak_n);
    if (bench->parsed()) return cmd_bench(bench_ns, bench_reps);
    if (cong->parsed()) {
      if (cs->parsed())
        return cmd_congruence_search(cs_m, cs_lmin, cs_lmax, cs_out, cs_jobs,
                                     cs_json);
      if (cv->parsed()) return cmd_congruence_verify(cv_a, cv_b, cv_m, cv_kmax);
    }
  } catch (const partfun::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
