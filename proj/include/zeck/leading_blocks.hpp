#pragma once

#include "zeck/system.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zeck {

/// An element of ℋ_s (or the exclusive block closing it). For s < N the
/// digits are zero-padded to length N.
struct LeadingBlock {
  CoefficientFunction digits;
  std::size_t s = 0;
  NumerationSystem system;
  bool exclusive = false;

  std::string to_string() const { return digits.to_string(); }
};

namespace detail {

inline std::size_t block_width(std::size_t s, const NumerationSystem& sys) { return std::max(s, sys.N()); }

// Lexicographic successor of the first s digits among valid tuples; the
// remaining digits are zeroed. Returns false for the largest tuple.
inline bool lex_next(std::vector<Digit>& d, std::size_t s, const PrincipalBlock& L) {
  std::vector<std::size_t> phase(s + 1, 0);
  for (std::size_t i = 0; i < s; ++i) {
    MembershipState st{phase[i]};
    if (!st.push(d[i], L)) throw std::logic_error("lex_next: tuple outside the collection");
    phase[i + 1] = st.phase;
  }
  for (std::size_t i = s; i-- > 0;) {
    if (d[i] < L.theta(phase[i] + 1)) {
      ++d[i];
      std::fill(d.begin() + i + 1, d.end(), 0);
      return true;
    }
  }
  return false;
}

template <class Real>
Real signed_dot_hat(const std::vector<long long>& diff, const Real& theta) {
  Real acc = Real(0);
  for (std::size_t k = diff.size(); k-- > 0;) acc = acc * theta + Real(diff[k]);
  return acc;
}

}  // namespace detail

/// Exclusive block b_{ℓ+1} of ℋ_s.
inline CoefficientFunction exclusive_block(std::size_t s, const NumerationSystem& sys) {
  if (s == 0) throw std::invalid_argument("exclusive_block: s must be at least 1");
  const PrincipalBlock& L = sys.block();
  const std::size_t N = L.size();
  if (s < N) {
    std::vector<Digit> d = L.entries();
    d.back() += 1;
    return CoefficientFunction(std::move(d));
  }
  const std::size_t p = s % N;
  std::vector<Digit> d(s, 0);
  for (std::size_t k = 1; k <= s - p; ++k) d[k - 1] = L.theta(k);
  d[s - p - 1] += 1;
  return CoefficientFunction(std::move(d));
}

/// Smallest block (1,0,...,0) of ℋ_s.
inline CoefficientFunction first_block(std::size_t s, const NumerationSystem& sys) {
  if (s == 0) throw std::invalid_argument("first_block: s must be at least 1");
  std::vector<Digit> d(detail::block_width(s, sys), 0);
  d[0] = 1;
  return CoefficientFunction(std::move(d));
}

/// Whether digits form an element of ℋ_s (padded form when s < N).
inline bool in_family(const CoefficientFunction& digits, std::size_t s, const NumerationSystem& sys) {
  if (s == 0 || digits.len() != detail::block_width(s, sys)) return false;
  for (std::size_t k = s + 1; k <= digits.len(); ++k) {
    if (digits(k) != 0) return false;
  }
  return detail::is_member(std::span<const Digit>(digits.digits().data(), s), sys.block(), false);
}

/// #ℋ_s = H_{s+1} - H_s.
inline BigInt family_size(std::size_t s, const NumerationSystem& sys) { return sys.H(s + 1) - sys.H(s); }

/// LB_s(n), or nothing when the expansion of n is shorter than s.
inline std::optional<LeadingBlock> leading_block(const BigInt& n, std::size_t s, const NumerationSystem& sys) {
  if (n < 1) throw std::domain_error("leading_block: n must be positive, got " + n.str());
  if (s == 0) throw std::invalid_argument("leading_block: s must be at least 1");
  std::vector<Digit> head;
  if (!expand_prefix(n, s, sys, head)) return std::nullopt;
  head.resize(detail::block_width(s, sys), 0);
  return LeadingBlock{CoefficientFunction(std::move(head)), s, sys, false};
}

inline LeadingBlock make_block(const CoefficientFunction& digits, std::size_t s, const NumerationSystem& sys) {
  CoefficientFunction d = digits.len() < detail::block_width(s, sys) && digits.len() == s
                              ? digits.padded(detail::block_width(s, sys))
                              : digits;
  if (!in_family(d, s, sys)) {
    throw std::domain_error("block (" + digits.to_string() + ") is not a leading block of length " +
                            std::to_string(s) + " in system " + sys.id());
  }
  return LeadingBlock{std::move(d), s, sys, false};
}

/// Block given by its own digits; short blocks (s < N) are padded.
inline LeadingBlock make_block(const CoefficientFunction& digits, const NumerationSystem& sys) {
  return make_block(digits, digits.len(), sys);
}

/// b̃: next block of ℋ_s, or the exclusive block after the largest.
inline LeadingBlock successor(const LeadingBlock& b) {
  if (b.exclusive || !in_family(b.digits, b.s, b.system)) {
    throw std::domain_error("successor: (" + b.digits.to_string() + ") is not in the family of length " +
                            std::to_string(b.s));
  }
  std::vector<Digit> d = b.digits.digits();
  if (detail::lex_next(d, b.s, b.system.block())) return LeadingBlock{CoefficientFunction(std::move(d)), b.s, b.system, false};
  return LeadingBlock{exclusive_block(b.s, b.system), b.s, b.system, true};
}

/// (b̃ - b)·Ĥ and b·Ĥ in the requested precision.
template <class Real>
std::pair<Real, Real> block_gap(const LeadingBlock& b, const Real& theta) {
  const LeadingBlock next = successor(b);
  std::vector<long long> diff(b.digits.len());
  for (std::size_t k = 1; k <= diff.size(); ++k) {
    diff[k - 1] = static_cast<long long>(next.digits(k)) - static_cast<long long>(b.digits(k));
  }
  return {detail::signed_dot_hat(diff, theta), dot_hat<Real>(b.digits.digits(), theta)};
}

inline ExtReal benford_probability_ext(const LeadingBlock& b) {
  const auto& root = b.system.root_ext();
  const auto [gap, base] = block_gap<ExtReal>(b, root.theta);
  return boost::multiprecision::log1p(gap / base) / b.system.log_psi_ext();
}

/// log_ψ(b̃·Ĥ / b·Ĥ).
inline double benford_probability(const LeadingBlock& b) {
  if (b.s > 30) return benford_probability_ext(b).convert_to<double>();
  const auto [gap, base] = block_gap<double>(b, b.system.theta());
  return std::log1p(gap / base) / b.system.log_psi();
}

/// [lo, hi) of the n with H_m <= n < H_{m+1} and LB_s(n) = b.
inline std::pair<BigInt, BigInt> block_range(const LeadingBlock& b, std::size_t m) {
  if (m < b.s) throw std::invalid_argument("block_range: m must be at least the block length");
  if (!in_family(b.digits, b.s, b.system)) {
    throw std::domain_error("block_range: (" + b.digits.to_string() + ") is not a leading block");
  }
  auto low = [&](const CoefficientFunction& d) {
    BigInt v = 0;
    for (std::size_t j = 1; j <= b.s; ++j) {
      if (d(j) != 0) v += BigInt(d(j)) * b.system.H(m - j + 1);
    }
    return v;
  };
  const LeadingBlock next = successor(b);
  BigInt hi = next.exclusive ? b.system.H(m + 1) : low(next.digits);
  return {low(b.digits), std::move(hi)};
}

/// Lazy walk over ℋ_s in increasing order, tracking b·Ĥ and the gap to b̃.
template <class Real>
class BlockWalker {
 public:
  BlockWalker(std::size_t s, const NumerationSystem& sys, Real theta)
      : sys_(sys), L_(sys.block()), s_(s), theta_(std::move(theta)) {
    digits_ = first_block(s, sys).digits();
    pow_.resize(digits_.size() + 1);
    pow_[0] = Real(1);
    for (std::size_t i = 1; i < pow_.size(); ++i) pow_[i] = pow_[i - 1] * theta_;
    phase_.assign(s_ + 1, 0);
    prefix_.assign(s_ + 1, Real(0));
    refresh_from(0);
  }

  const std::vector<Digit>& digits() const { return digits_; }
  bool done() const { return done_; }
  bool is_largest() const { return next_pos_ == kNone; }
  const Real& dot() const { return prefix_[s_]; }

  // (b̃ - b)·Ĥ for the current block.
  Real gap() const {
    if (next_pos_ != kNone) {
      Real tail = Real(0);
      for (std::size_t j = s_; j > next_pos_ + 1; --j) tail += Real(static_cast<long long>(digits_[j - 1])) * pow_[j - 1];
      return pow_[next_pos_] - tail;
    }
    const CoefficientFunction ex = exclusive_block(s_, sys_);
    std::vector<long long> diff(digits_.size());
    for (std::size_t k = 0; k < diff.size(); ++k) {
      diff[k] = static_cast<long long>(ex.digits()[k]) - static_cast<long long>(digits_[k]);
    }
    return detail::signed_dot_hat(diff, theta_);
  }

  void advance() {
    if (next_pos_ == kNone) {
      done_ = true;
      return;
    }
    const std::size_t i = next_pos_;
    ++digits_[i];
    std::fill(digits_.begin() + i + 1, digits_.begin() + s_, 0);
    refresh_from(i);
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void refresh_from(std::size_t i) {
    for (std::size_t k = i; k < s_; ++k) {
      detail::MembershipState st{phase_[k]};
      st.push(digits_[k], L_);
      phase_[k + 1] = st.phase;
      prefix_[k + 1] = prefix_[k] + Real(static_cast<long long>(digits_[k])) * pow_[k];
    }
    next_pos_ = kNone;
    for (std::size_t k = s_; k-- > 0;) {
      if (digits_[k] < L_.theta(phase_[k] + 1)) {
        next_pos_ = k;
        break;
      }
    }
  }

  NumerationSystem sys_;
  const PrincipalBlock& L_;
  std::size_t s_;
  Real theta_;
  std::vector<Digit> digits_;
  std::vector<Real> pow_;
  std::vector<std::size_t> phase_;
  std::vector<Real> prefix_;
  std::size_t next_pos_ = kNone;
  bool done_ = false;
};

/// The ordered family ℋ_s with its exclusive block.
struct BlockFamily {
  std::size_t s = 0;
  std::vector<CoefficientFunction> blocks;
  CoefficientFunction exclusive;
  NumerationSystem system;

  LeadingBlock block(std::size_t k) const { return LeadingBlock{blocks.at(k), s, system, false}; }
  std::size_t size() const { return blocks.size(); }
};

inline constexpr std::size_t kDefaultFamilyCap = std::size_t{1} << 22;

inline BlockFamily enumerate_blocks(std::size_t s, const NumerationSystem& sys, std::size_t cap = kDefaultFamilyCap) {
  if (s == 0) throw std::invalid_argument("enumerate_blocks: s must be at least 1");
  const BigInt size = family_size(s, sys);
  if (size > cap) {
    throw std::length_error("enumerate_blocks: family of length " + std::to_string(s) + " in system " + sys.id() +
                            " has " + size.str() + " blocks, above the cap of " + std::to_string(cap));
  }
  BlockFamily fam{s, {}, exclusive_block(s, sys), sys};
  fam.blocks.reserve(size.convert_to<std::size_t>());
  std::vector<Digit> d = first_block(s, sys).digits();
  do {
    fam.blocks.emplace_back(d);
  } while (detail::lex_next(d, s, sys.block()));
  if (fam.blocks.size() != size) throw std::logic_error("enumerate_blocks: family size disagrees with H_{s+1} - H_s");
  return fam;
}

struct ProbabilityTotal {
  double total = 0;
  BigInt blocks = 0;
  bool complete = false;
  std::vector<Digit> frontier;  // first block not visited when incomplete
};

/// Σ_{b∈ℋ_s} benford_probability(b) by walking the family with compensated
/// summation; stops early once `budget` blocks have been visited.
inline ProbabilityTotal probability_total(std::size_t s, const NumerationSystem& sys, std::uint64_t budget) {
  ProbabilityTotal out;
  auto run = [&](auto theta, auto log_psi) {
    using Real = decltype(theta);
    BlockWalker<Real> w(s, sys, theta);
    double sum = 0, comp = 0;
    std::uint64_t visited = 0;
    while (!w.done() && visited < budget) {
      Real p;
      if constexpr (std::is_same_v<Real, double>) p = std::log1p(w.gap() / w.dot()) / log_psi;
      else p = boost::multiprecision::log1p(w.gap() / w.dot()) / log_psi;
      const double term = static_cast<double>(p);
      const double t = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
      ++visited;
      w.advance();
    }
    out.total = sum + comp;
    out.blocks = visited;
    out.complete = w.done();
    if (!out.complete) out.frontier = w.digits();
  };
  if (s > 30) run(sys.root_ext().theta, sys.log_psi_ext());
  else run(sys.theta(), sys.log_psi());
  return out;
}

/// Classifies n by its leading block of length s through per-length
/// thresholds pad(b, m)*H, without expanding n.
class BlockClassifier {
 public:
  explicit BlockClassifier(const BlockFamily& family) : fam_(&family) {}

  // Index into the family, or nothing when LB_s(n) is undefined.
  std::optional<std::size_t> classify(const BigInt& n) {
    const std::size_t m = fam_->system.index_of(n);
    if (m < fam_->s) return std::nullopt;
    if (m != cached_m_) load(m);
    const auto it = std::upper_bound(lo_.begin(), lo_.end(), n);
    return static_cast<std::size_t>(it - lo_.begin()) - 1;
  }

  std::optional<std::size_t> classify(const BigInt& n, std::size_t m) {
    if (m < fam_->s) return std::nullopt;
    if (m != cached_m_) load(m);
    const auto it = std::upper_bound(lo_.begin(), lo_.end(), n);
    return static_cast<std::size_t>(it - lo_.begin()) - 1;
  }

  const std::vector<BigInt>& thresholds(std::size_t m) {
    if (m != cached_m_) load(m);
    return lo_;
  }

 private:
  void load(std::size_t m) {
    const NumerationSystem& sys = fam_->system;
    const std::size_t s = fam_->s;
    hs_.resize(s);
    for (std::size_t j = 1; j <= s; ++j) hs_[j - 1] = sys.H(m - j + 1);
    lo_.resize(fam_->blocks.size());
    for (std::size_t k = 0; k < fam_->blocks.size(); ++k) {
      const auto& d = fam_->blocks[k].digits();
      BigInt& v = lo_[k];
      v = 0;
      for (std::size_t j = 0; j < s; ++j) {
        if (d[j] == 1) v += hs_[j];
        else if (d[j] != 0) v += hs_[j] * d[j];
      }
    }
    cached_m_ = m;
  }

  const BlockFamily* fam_;
  std::size_t cached_m_ = 0;
  std::vector<BigInt> hs_;
  std::vector<BigInt> lo_;
};

}  // namespace zeck
