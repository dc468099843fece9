#pragma once

#include "zeck/continuation.hpp"
#include "zeck/leading_blocks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zeck {

enum class SequenceKind { power, linear_recurrence, floor_geometric, monomial, synthesized };

/// A sequence K_1, K_2, ... of positive integers.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::power;
  BigInt base = 2;                  // power: K_n = base^n
  std::vector<BigInt> coeffs;       // linear recurrence K_{k+r} = Σ c_i K_{k+r-i}
  std::vector<BigInt> init;
  std::string constant = "1";       // floor-geometric: K_n = floor(c γ^n), c as an expression
  BigRational gamma = 2;
  unsigned exponent = 1;            // monomial: K_n = n^a
  std::optional<LimitProfile> profile;  // synthesized
  std::optional<NumerationSystem> system;
  std::size_t offset = 0;

  static SequenceSpec power(const BigInt& base) {
    if (base < 2) throw std::invalid_argument("power sequence needs base >= 2, got " + base.str());
    SequenceSpec s;
    s.kind = SequenceKind::power;
    s.base = base;
    return s;
  }

  static SequenceSpec linear_recurrence(std::vector<BigInt> coeffs, std::vector<BigInt> init) {
    if (coeffs.empty() || coeffs.size() != init.size()) {
      throw std::invalid_argument("linear recurrence needs as many initial values as coefficients");
    }
    SequenceSpec s;
    s.kind = SequenceKind::linear_recurrence;
    s.coeffs = std::move(coeffs);
    s.init = std::move(init);
    return s;
  }

  static SequenceSpec lucas() { return linear_recurrence({1, 1}, {2, 1}); }

  static SequenceSpec floor_geometric(std::string constant, const BigRational& gamma) {
    if (gamma <= 1) throw std::invalid_argument("floor-geometric ratio must exceed 1");
    if (!(parse_real(constant) > 0)) throw std::invalid_argument("floor-geometric constant must be positive");
    SequenceSpec s;
    s.kind = SequenceKind::floor_geometric;
    s.constant = std::move(constant);
    s.gamma = gamma;
    return s;
  }

  static SequenceSpec monomial(unsigned a) {
    if (a == 0) throw std::invalid_argument("monomial exponent must be positive");
    SequenceSpec s;
    s.kind = SequenceKind::monomial;
    s.exponent = a;
    return s;
  }

  static SequenceSpec synthesized(LimitProfile profile, NumerationSystem sys, std::size_t offset = 0) {
    SequenceSpec s;
    s.kind = SequenceKind::synthesized;
    s.profile = std::move(profile);
    s.system = std::move(sys);
    s.offset = offset;
    return s;
  }

  std::string to_string() const {
    switch (kind) {
      case SequenceKind::power: return "power:" + base.str();
      case SequenceKind::linear_recurrence: {
        std::string out = "linrec:";
        for (std::size_t i = 0; i < coeffs.size(); ++i) out += (i ? "," : "") + coeffs[i].str();
        out += ":";
        for (std::size_t i = 0; i < init.size(); ++i) out += (i ? "," : "") + init[i].str();
        return out;
      }
      case SequenceKind::floor_geometric: return "floorgeo:" + constant + ":" + gamma.str();
      case SequenceKind::monomial: return "monomial:" + std::to_string(exponent);
      case SequenceKind::synthesized:
        return "synth:" + profile->name() + (offset ? "@" + std::to_string(offset) : std::string());
    }
    return {};
  }
};

/// Profile from a short name: line, benford, power:E, fake-benford:S.
inline LimitProfile parse_profile(std::string_view text, const NumerationSystem& sys) {
  if (text == "line") return LimitProfile::line();
  if (text == "benford") return LimitProfile::benford(sys);
  if (text.starts_with("power:")) {
    const std::string e(text.substr(6));
    char* end = nullptr;
    const double v = std::strtod(e.c_str(), &end);
    if (e.empty() || *end != '\0') throw std::invalid_argument("malformed profile exponent '" + e + "'");
    return LimitProfile::power(v);
  }
  if (text.starts_with("fake-benford:")) {
    const BigInt s = parse_bigint(text.substr(13));
    if (s < 1 || s > 40) throw std::invalid_argument("fake-benford length must be in 1..40");
    return fake_benford_profile(sys, s.convert_to<std::size_t>());
  }
  throw std::invalid_argument("unknown profile '" + std::string(text) +
                              "' (expected line, benford, power:E or fake-benford:S)");
}

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    out.emplace_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

inline std::vector<BigInt> parse_bigint_list(std::string_view text) {
  std::vector<BigInt> out;
  for (const auto& tok : split(text, ',')) out.push_back(parse_bigint(tok));
  return out;
}

inline BigRational parse_rational(std::string_view text) {
  const auto parts = split(text, '/');
  if (parts.size() == 1) return BigRational(parse_bigint(parts[0]));
  if (parts.size() != 2) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  const BigInt den = parse_bigint(parts[1]);
  if (den == 0) throw std::domain_error("zero denominator in '" + std::string(text) + "'");
  return BigRational(parse_bigint(parts[0]), den);
}

}  // namespace detail

/// Parses power:A, linrec:C1,..,Cr:I1,..,Ir, lucas, floorgeo:C:P/Q,
/// monomial:A and synth:PROFILE[@OFFSET] (the latter over `sys`).
inline SequenceSpec parse_sequence(std::string_view text, const std::optional<NumerationSystem>& sys = std::nullopt) {
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "lucas" && rest.empty()) return SequenceSpec::lucas();
  if (head == "power") return SequenceSpec::power(parse_bigint(rest));
  if (head == "monomial") {
    const BigInt a = parse_bigint(rest);
    if (a < 0 || a > 64) throw std::invalid_argument("monomial exponent must be in 1..64");
    return SequenceSpec::monomial(a.convert_to<unsigned>());
  }
  if (head == "linrec") {
    const auto parts = detail::split(rest, ':');
    if (parts.size() != 2) throw std::invalid_argument("expected linrec:C1,...,Cr:I1,...,Ir");
    return SequenceSpec::linear_recurrence(detail::parse_bigint_list(parts[0]), detail::parse_bigint_list(parts[1]));
  }
  if (head == "floorgeo") {
    const std::size_t last = rest.rfind(':');
    if (last == std::string_view::npos) throw std::invalid_argument("expected floorgeo:CONSTANT:P/Q");
    return SequenceSpec::floor_geometric(std::string(rest.substr(0, last)), detail::parse_rational(rest.substr(last + 1)));
  }
  if (head == "synth") {
    if (!sys) throw std::invalid_argument("synth sequences need a numeration system");
    const std::size_t at = rest.find('@');
    const std::size_t offset = at == std::string_view::npos ? 0 : parse_bigint(rest.substr(at + 1)).convert_to<std::size_t>();
    return SequenceSpec::synthesized(parse_profile(rest.substr(0, at), *sys), *sys, offset);
  }
  throw std::invalid_argument("unknown sequence '" + std::string(text) +
                              "' (expected power, linrec, lucas, floorgeo, monomial or synth)");
}

namespace detail {

// floor(c γ^n) certified by an interval of relative width 2^(8 - prec).
inline std::vector<BigInt> floor_geometric_terms(const SequenceSpec& spec, std::size_t count) {
  const BigInt p = numerator(spec.gamma), q = denominator(spec.gamma);
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(bit_length(pow(p, static_cast<unsigned>(count))) + 192);
  std::vector<BigInt> out;
  out.reserve(count);
  for (int attempt = 0; attempt < 4 && out.size() < count; ++attempt, prec *= 2) {
    out.clear();
    mpfr_t c, v, lo, hi, t;
    for (mpfr_ptr x : {c, v, lo, hi, t}) mpfr_init2(x, prec);
    eval_real(spec.constant, c, prec);
    BigInt pn = 1, qn = 1;
    bool ok = true;
    for (std::size_t n = 1; n <= count && ok; ++n) {
      pn *= p;
      qn *= q;
      mpfr_set_z(t, pn.backend().data(), MPFR_RNDN);
      mpfr_mul(v, c, t, MPFR_RNDN);
      mpfr_set_z(t, qn.backend().data(), MPFR_RNDN);
      mpfr_div(v, v, t, MPFR_RNDN);
      mpfr_mul_2si(t, v, 8 - prec, MPFR_RNDU);
      mpfr_abs(t, t, MPFR_RNDU);
      mpfr_sub(lo, v, t, MPFR_RNDD);
      mpfr_add(hi, v, t, MPFR_RNDU);
      mpfr_floor(lo, lo);
      mpfr_floor(hi, hi);
      if (!mpfr_equal_p(lo, hi)) {
        ok = false;
        break;
      }
      BigInt k;
      mpfr_get_z(k.backend().data(), lo, MPFR_RNDN);
      out.push_back(std::move(k));
    }
    for (mpfr_ptr x : {c, v, lo, hi, t}) mpfr_clear(x);
    if (!ok) out.clear();
  }
  if (out.size() != count) {
    throw std::domain_error("floor-geometric " + spec.to_string() +
                            ": a term lies too close to an integer to certify its floor");
  }
  return out;
}

}  // namespace detail

/// First `count` terms; rejects non-positive sequences and sequences whose
/// second half is not strictly increasing.
inline std::vector<BigInt> generate(const SequenceSpec& spec, std::size_t count) {
  if (count == 0) throw std::invalid_argument("generate: count must be at least 1");
  std::vector<BigInt> out;
  out.reserve(count);
  switch (spec.kind) {
    case SequenceKind::power: {
      BigInt v = 1;
      for (std::size_t n = 1; n <= count; ++n) out.push_back(v *= spec.base);
      break;
    }
    case SequenceKind::linear_recurrence: {
      const std::size_t r = spec.coeffs.size();
      for (std::size_t n = 0; n < count; ++n) {
        if (n < r) {
          out.push_back(spec.init[n]);
          continue;
        }
        BigInt v = 0;
        for (std::size_t i = 1; i <= r; ++i) v += spec.coeffs[i - 1] * out[n - i];
        out.push_back(std::move(v));
      }
      break;
    }
    case SequenceKind::floor_geometric: out = detail::floor_geometric_terms(spec, count); break;
    case SequenceKind::monomial:
      for (std::size_t n = 1; n <= count; ++n) out.push_back(pow(BigInt(n), spec.exponent));
      break;
    case SequenceKind::synthesized: out = synthesize(*spec.profile, *spec.system, count, spec.offset); break;
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (out[n] < 1) {
      throw std::domain_error(spec.to_string() + ": term " + std::to_string(n + 1) + " is not positive (" +
                              out[n].str() + ")");
    }
    if (n > count / 2 && out[n] <= out[n - 1]) {
      throw std::domain_error(spec.to_string() + ": terms are not increasing at index " + std::to_string(n + 1));
    }
  }
  return out;
}

struct BlockFrequency {
  CoefficientFunction block;
  std::uint64_t count = 0;
  double empirical = 0;
  double theoretical = 0;
  double deviation = 0;
};

struct FrequencyReport {
  std::string system;
  std::size_t s = 0;
  std::vector<BlockFrequency> blocks;
  std::uint64_t terms = 0;
  std::uint64_t defined = 0;  // terms whose expansion has at least s digits
  double max_deviation = 0;
};

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

// Runs body(begin, end) over `threads` contiguous slices of [0, n).
template <class Body>
void parallel_ranges(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        body(n * t / threads, n * (t + 1) / threads);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline constexpr std::size_t kThresholdFamilyLimit = 64;

}  // namespace detail

/// Family index of LB_s(n) for each term (nothing when undefined). Small
/// families classify by thresholds, large ones by the first s greedy digits.
inline std::vector<std::optional<std::size_t>> classify_terms(const std::vector<BigInt>& terms, const BlockFamily& fam,
                                                               unsigned threads = default_threads()) {
  std::vector<std::optional<std::size_t>> out(terms.size());
  if (!terms.empty()) fam.system.reserve(fam.system.index_of(*std::max_element(terms.begin(), terms.end())) + 2);
  detail::parallel_ranges(terms.size(), threads, [&](std::size_t begin, std::size_t end) {
    if (fam.size() <= detail::kThresholdFamilyLimit) {
      BlockClassifier cls(fam);
      for (std::size_t i = begin; i < end; ++i) out[i] = cls.classify(terms[i]);
      return;
    }
    std::vector<Digit> head;
    for (std::size_t i = begin; i < end; ++i) {
      if (!expand_prefix(terms[i], fam.s, fam.system, head)) continue;
      head.resize(fam.blocks.front().len(), 0);
      const CoefficientFunction key(head);
      const auto it = std::lower_bound(fam.blocks.begin(), fam.blocks.end(), key);
      if (it == fam.blocks.end() || *it != key) throw std::logic_error("classify_terms: prefix outside the family");
      out[i] = static_cast<std::size_t>(it - fam.blocks.begin());
    }
  });
  return out;
}

inline FrequencyReport frequency_report(const std::vector<BigInt>& terms, const BlockFamily& fam,
                                        unsigned threads = default_threads()) {
  const auto cls = classify_terms(terms, fam, threads);
  FrequencyReport rep;
  rep.system = fam.system.id();
  rep.s = fam.s;
  rep.terms = terms.size();
  std::vector<std::uint64_t> counts(fam.size(), 0);
  for (const auto& c : cls) {
    if (!c) continue;
    ++counts[*c];
    ++rep.defined;
  }
  rep.blocks.reserve(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    BlockFrequency f;
    f.block = fam.blocks[k];
    f.count = counts[k];
    f.empirical = rep.defined ? static_cast<double>(counts[k]) / static_cast<double>(rep.defined) : 0.0;
    f.theoretical = benford_probability(fam.block(k));
    f.deviation = std::abs(f.empirical - f.theoretical);
    rep.max_deviation = std::max(rep.max_deviation, f.deviation);
    rep.blocks.push_back(std::move(f));
  }
  return rep;
}

inline FrequencyReport empirical_block_frequency(const SequenceSpec& spec, const NumerationSystem& sys, std::size_t s,
                                                 std::size_t count, unsigned threads = default_threads()) {
  return frequency_report(generate(spec, count), enumerate_blocks(s, sys), threads);
}

struct OscillationPoint {
  std::size_t m = 0;  // window: n^a ∈ [H_m, H_{m+1})
  BigInt n;
  double proportion = 0;
};

struct OscillationTrace {
  unsigned a = 1;
  CoefficientFunction block;
  std::size_t s = 0;
  std::string system;
  double beta_lo = 0, beta_hi = 0;  // log_ψ(b·Ĥ), log_ψ(b̃·Ĥ)
  std::vector<OscillationPoint> points;
  std::optional<double> limsup, liminf;  // closed forms, Fibonacci only
  double empirical_max = 0, empirical_min = 1;
};

namespace detail {

// Limit of the running proportion at position p of a window, for blocks
// occupying [b1, b2) of the fractional range.
inline double oscillation_profile(double p, double b1, double b2, unsigned a, double psi) {
  const double u = std::pow(psi, 1.0 / a);
  const double full = (std::pow(u, b2) - std::pow(u, b1)) / (u - 1);
  const double c = std::clamp(p, b1, b2);
  return (full + std::pow(u, c) - std::pow(u, b1)) / std::pow(u, p);
}

}  // namespace detail

/// Running proportion P_n = #{k <= n : LB_s(k^a) = b}/n, counted exactly per
/// window through integer roots of the block thresholds, sampled on the grid
/// n = floor(ℌ(m + j/16)^{1/a}) and at the window's block endpoints.
inline OscillationTrace oscillation_scan(unsigned a, const LeadingBlock& b, std::size_t min_m, std::size_t max_m) {
  if (a == 0) throw std::invalid_argument("oscillation_scan: a must be at least 1");
  if (b.exclusive || !in_family(b.digits, b.s, b.system)) throw std::domain_error("oscillation_scan: not a leading block");
  if (min_m < b.s || max_m < min_m) throw std::invalid_argument("oscillation_scan: need s <= min_m <= max_m");
  const NumerationSystem& sys = b.system;
  sys.reserve(max_m + 3);
  OscillationTrace tr;
  tr.a = a;
  tr.block = b.digits;
  tr.s = b.s;
  tr.system = sys.id();
  const auto [gap, base] = block_gap<double>(b, sys.theta());
  tr.beta_lo = std::log(base) / sys.log_psi();
  tr.beta_hi = std::log(base + gap) / sys.log_psi();
  if (sys.block() == PrincipalBlock{1, 0}) {
    double hi = 0, lo = 1;
    for (double p : {0.0, tr.beta_lo, tr.beta_hi, 1.0}) {
      const double v = detail::oscillation_profile(p, tr.beta_lo, tr.beta_hi, a, sys.psi());
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    tr.limsup = hi;
    tr.liminf = lo;
  }

  // Window j holds the k with k^a ∈ [H_j, H_{j+1}); its block-b members are
  // k ∈ [first_j, stop_j).
  std::vector<BigInt> first(max_m + 1), stop(max_m + 1), before(max_m + 2, 0);
  for (std::size_t j = b.s; j <= max_m; ++j) {
    const auto [lo, hi] = block_range(b, j);
    first[j] = ceil_root(lo, a);
    stop[j] = ceil_root(hi, a);
    before[j + 1] = before[j] + (stop[j] - first[j]);
  }
  auto count_upto = [&](const BigInt& n, std::size_t m) {
    BigInt c = before[m];
    const BigInt top = std::min<BigInt>(n + 1, stop[m]);
    if (top > first[m]) c += top - first[m];
    return c;
  };
  const BenfordContinuation h(sys);
  for (std::size_t m = min_m; m <= max_m; ++m) {
    std::vector<BigInt> ns;
    for (int j = 0; j < 16; ++j) {
      const ExtReal x = h(ext(static_cast<double>(m)) + ext(j / 16.0));
      BigInt n = floor_root(boost::multiprecision::floor(x).convert_to<BigInt>(), a);
      ns.push_back(n);
    }
    for (const BigInt& e : {first[m], stop[m]}) {
      ns.push_back(e);
      ns.push_back(e - 1);
    }
    const BigInt lo_k = ceil_root(sys.H(m), a), hi_k = ceil_root(sys.H(m + 1), a);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (const BigInt& n : ns) {
      if (n < lo_k || n >= hi_k || n < 1) continue;
      const double prop = ratio_to_double(count_upto(n, m), n);
      tr.points.push_back({m, n, prop});
      tr.empirical_max = std::max(tr.empirical_max, prop);
      tr.empirical_min = std::min(tr.empirical_min, prop);
    }
  }
  return tr;
}

struct WithinExpansionReport {
  std::size_t t = 0;
  std::string outer, inner;
  CoefficientFunction block;
  double expected = 0;
  double epsilon = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double fraction = 0;
  double mean = 0;  // mean of P_t(n)
};

namespace detail {

// Uniform integer in [0, bound) by rejection on the bit length of bound.
inline BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng) {
  const std::size_t bits = bit_length(bound - 1);
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(std::max<std::size_t>(words, 1));
  while (true) {
    for (auto& w : buf) w = rng();
    if (bits % 64) buf.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
    BigInt v;
    mpz_import(v.backend().data(), buf.size(), -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (v < bound) return v;
  }
}

}  // namespace detail

/// P_t(n) = Σ μ(k) χ_S(K_k) / Σ μ(k) over the outer expansion n = Σ μ(k) K_k,
/// S = {K_k : LB_s^inner(K_k) = b}, for `samples` uniform n ∈ [1, K_{t+1}).
inline WithinExpansionReport within_expansion(const NumerationSystem& outer, const LeadingBlock& b, std::size_t t,
                                              double epsilon, std::uint64_t samples, std::uint64_t seed = 1,
                                              unsigned threads = default_threads()) {
  if (t < 1) throw std::invalid_argument("within_expansion: t must be at least 1");
  if (samples == 0) throw std::invalid_argument("within_expansion: samples must be at least 1");
  if (!(epsilon > 0)) throw std::invalid_argument("within_expansion: epsilon must be positive");
  if (b.exclusive || !in_family(b.digits, b.s, b.system)) throw std::domain_error("within_expansion: not a leading block");
  const NumerationSystem& inner = b.system;
  outer.reserve(t + 2);
  std::vector<char> in_s(t + 2, 0);
  for (std::size_t k = 1; k <= t + 1; ++k) {
    const auto lb = leading_block(outer.H(k), b.s, inner);
    in_s[k] = lb && lb->digits == b.digits;
  }
  WithinExpansionReport rep;
  rep.t = t;
  rep.outer = outer.id();
  rep.inner = inner.id();
  rep.block = b.digits;
  rep.expected = benford_probability(b);
  rep.epsilon = epsilon;
  rep.samples = samples;
  const BigInt bound = outer.H(t + 1) - 1;

  // Samples are drawn in fixed chunks with their own seeds, so the result
  // does not depend on the thread count.
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  std::vector<double> sums(chunks, 0);
  detail::parallel_ranges(chunks, threads, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      std::seed_seq sq{seed, static_cast<std::uint64_t>(c)};
      std::mt19937_64 rng(sq);
      const std::uint64_t n_here = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
      for (std::uint64_t i = 0; i < n_here; ++i) {
        const BigInt n = detail::uniform_below(bound, rng) + 1;
        const CoefficientFunction mu = expand(n, outer);
        std::uint64_t num = 0, den = 0;
        for (std::size_t i2 = 1; i2 <= mu.len(); ++i2) {
          const std::size_t k = mu.len() - i2 + 1;
          den += mu(i2);
          if (in_s[k]) num += mu(i2);
        }
        const double p = static_cast<double>(num) / static_cast<double>(den);
        sums[c] += p;
        if (std::abs(p - rep.expected) < epsilon) ++hits[c];
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    rep.hits += hits[c];
    rep.mean += sums[c];
  }
  rep.fraction = static_cast<double>(rep.hits) / static_cast<double>(samples);
  rep.mean /= static_cast<double>(samples);
  return rep;
}

struct AbsoluteFlag {
  std::string system;
  std::size_t s = 0;
  CoefficientFunction block;
  double deviation = 0;
};

struct AbsoluteReport {
  std::vector<FrequencyReport> reports;
  std::vector<AbsoluteFlag> flags;
  std::vector<std::string> skipped;  // (system, s) whose family exceeds the cap
  double threshold = 0;
};

/// Frequency reports for every system and s = 1..s_max, flagging blocks
/// whose deviation exceeds `threshold`.
inline AbsoluteReport absolute_benford_suite(const SequenceSpec& spec, const std::vector<NumerationSystem>& systems,
                                             std::size_t s_max, std::size_t count, double threshold = 0.03,
                                             unsigned threads = default_threads(),
                                             std::size_t family_cap = std::size_t{1} << 16) {
  if (systems.empty()) throw std::invalid_argument("absolute_benford_suite: no systems given");
  if (s_max == 0) throw std::invalid_argument("absolute_benford_suite: s_max must be at least 1");
  const auto terms = generate(spec, count);
  AbsoluteReport out;
  out.threshold = threshold;
  for (const auto& sys : systems) {
    for (std::size_t s = 1; s <= s_max; ++s) {
      if (family_size(s, sys) > family_cap) {
        out.skipped.push_back(sys.id() + " s=" + std::to_string(s));
        continue;
      }
      auto rep = frequency_report(terms, enumerate_blocks(s, sys, family_cap), threads);
      for (const auto& f : rep.blocks) {
        if (f.deviation > threshold) out.flags.push_back({rep.system, s, f.block, f.deviation});
      }
      out.reports.push_back(std::move(rep));
    }
  }
  return out;
}

}  // namespace zeck
