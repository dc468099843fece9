#pragma once

#include "zeck/block.hpp"
#include "zeck/numeric.hpp"
#include "zeck/spectral.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeck {

namespace detail {

// Append-only table of H_n. Readers never lock: chunks are published through
// atomics and never move once written.
class FundamentalTable {
 public:
  static constexpr std::size_t kChunk = 512;
  static constexpr std::size_t kMaxChunks = 1 << 15;

  explicit FundamentalTable(PrincipalBlock L) : L_(std::move(L)) {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
    ensure(2 * L_.size() + 2);
  }

  ~FundamentalTable() {
    for (auto& c : chunks_) delete[] c.load(std::memory_order_relaxed);
  }

  FundamentalTable(const FundamentalTable&) = delete;
  FundamentalTable& operator=(const FundamentalTable&) = delete;

  std::size_t size() const { return size_.load(std::memory_order_acquire); }

  const BigInt& at(std::size_t n) const {
    if (n == 0) throw std::out_of_range("fundamental sequence is 1-based");
    if (n > size()) const_cast<FundamentalTable*>(this)->ensure(n);
    const std::size_t i = n - 1;
    return chunks_[i / kChunk].load(std::memory_order_acquire)[i % kChunk];
  }

  void ensure(std::size_t n) {
    if (n <= size()) return;
    std::lock_guard lock(grow_);
    std::size_t have = size_.load(std::memory_order_relaxed);
    if (n <= have) return;
    const std::size_t target = std::max(n, 2 * have);
    if (target > kChunk * kMaxChunks) throw std::length_error("fundamental sequence index too large");
    const std::size_t N = L_.size();
    for (std::size_t m = have + 1; m <= target; ++m) {
      const std::size_t i = m - 1;
      BigInt*& slot = raw(i / kChunk);
      if (slot == nullptr) {
        slot = new BigInt[kChunk];
        chunks_[i / kChunk].store(slot, std::memory_order_release);
      }
      BigInt v;
      if (m <= N + 1) {
        v = 1;
        for (std::size_t k = 1; k < m; ++k) v += BigInt(L_[k]) * get(m - k);
      } else {
        for (std::size_t k = 1; k <= N; ++k) v += BigInt(L_[k]) * get(m - k);
        v += get(m - N);
      }
      slot[i % kChunk] = std::move(v);
    }
    size_.store(target, std::memory_order_release);
  }

 private:
  BigInt*& raw(std::size_t c) {
    if (owned_.size() <= c) owned_.resize(c + 1, nullptr);
    return owned_[c];
  }
  const BigInt& get(std::size_t n) const {
    const std::size_t i = n - 1;
    return owned_[i / kChunk][i % kChunk];
  }

  PrincipalBlock L_;
  std::mutex grow_;
  std::atomic<std::size_t> size_{0};
  std::array<std::atomic<BigInt*>, kMaxChunks> chunks_;
  std::vector<BigInt*> owned_;  // writer-side view, guarded by grow_
};

struct SystemState {
  explicit SystemState(PrincipalBlock block)
      : L(std::move(block)), H(L), root(dominant_zero<double>(L)), log_psi(std::log(root.psi)) {}

  PrincipalBlock L;
  FundamentalTable H;
  DominantRoot<double> root;
  double log_psi;

  std::once_flag ext_once;
  std::unique_ptr<DominantRoot<ExtReal>> ext_root;
  std::unique_ptr<ExtReal> ext_log_psi;
};

}  // namespace detail

/// A periodic Zeckendorf collection together with its fundamental sequence
/// and spectral data. Cheap to copy; copies share the same table.
class NumerationSystem {
 public:
  explicit NumerationSystem(PrincipalBlock L) : st_(std::make_shared<detail::SystemState>(std::move(L))) {}

  static NumerationSystem parse(std::string_view text) { return NumerationSystem(PrincipalBlock::parse(text)); }

  const PrincipalBlock& block() const { return st_->L; }
  std::size_t N() const { return st_->L.size(); }
  std::string id() const { return st_->L.to_string(); }

  const BigInt& H(std::size_t n) const { return st_->H.at(n); }

  void reserve(std::size_t n) const { st_->H.ensure(n); }

  const DominantRoot<double>& root() const { return st_->root; }
  double psi() const { return st_->root.psi; }
  double theta() const { return st_->root.theta; }
  double log_psi() const { return st_->log_psi; }

  const DominantRoot<ExtReal>& root_ext() const {
    std::call_once(st_->ext_once, [this] {
      st_->ext_root = std::make_unique<DominantRoot<ExtReal>>(dominant_zero<ExtReal>(st_->L));
      st_->ext_log_psi = std::make_unique<ExtReal>(boost::multiprecision::log(st_->ext_root->psi));
    });
    return *st_->ext_root;
  }

  const ExtReal& log_psi_ext() const {
    root_ext();
    return *st_->ext_log_psi;
  }

  /// m with H_m <= n < H_{m+1}, for n >= 1.
  std::size_t index_of(const BigInt& n) const {
    if (n < 1) throw std::domain_error("index_of: n must be positive");
    std::size_t hi = 2;
    while (H(hi) <= n) hi *= 2;
    std::size_t lo = hi / 2;  // H(lo) <= n < H(hi)
    if (H(lo) > n) lo = 1;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (H(mid) <= n) lo = mid; else hi = mid;
    }
    return lo;
  }

  friend bool operator==(const NumerationSystem& a, const NumerationSystem& b) { return a.block() == b.block(); }

 private:
  std::shared_ptr<detail::SystemState> st_;
};

inline std::vector<BigInt> fundamental_sequence(const NumerationSystem& sys, std::size_t count) {
  if (count == 0) throw std::invalid_argument("fundamental_sequence: count must be at least 1");
  sys.reserve(count);
  std::vector<BigInt> out;
  out.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) out.push_back(sys.H(n));
  return out;
}

/// ε*H = Σ ε(k) H_{t-k+1}.
inline BigInt evaluate_conv(std::span<const Digit> eps, const NumerationSystem& sys) {
  BigInt acc = 0;
  const std::size_t t = eps.size();
  for (std::size_t k = 1; k <= t; ++k) {
    if (eps[k - 1] != 0) acc += BigInt(eps[k - 1]) * sys.H(t - k + 1);
  }
  return acc;
}

inline BigInt evaluate_conv(const CoefficientFunction& eps, const NumerationSystem& sys) {
  return evaluate_conv(std::span<const Digit>(eps.digits()), sys);
}

/// ε·Q = Σ ε(k) Q_k, Q given 1-based as Q[0] = Q_1.
template <class Real, class Seq>
Real evaluate_dot(const CoefficientFunction& eps, const Seq& Q) {
  if (Q.size() < eps.len()) throw std::invalid_argument("evaluate_dot: sequence shorter than coefficient function");
  Real acc = Real(0);
  for (std::size_t k = 1; k <= eps.len(); ++k) {
    if (eps(k) != 0) acc += Real(static_cast<long long>(eps(k))) * Q[k - 1];
  }
  return acc;
}

/// ε·Ĥ with Ĥ_k = θ^{k-1}, Horner from the tail.
template <class Real>
Real dot_hat(std::span<const Digit> eps, const Real& theta) {
  Real acc = Real(0);
  for (std::size_t k = eps.size(); k-- > 0;) acc = acc * theta + Real(static_cast<long long>(eps[k]));
  return acc;
}

inline double dot_hat(const CoefficientFunction& eps, const NumerationSystem& sys) {
  return dot_hat<double>(eps.digits(), sys.theta());
}

inline ExtReal dot_hat_ext(const CoefficientFunction& eps, const NumerationSystem& sys) {
  return dot_hat<ExtReal>(eps.digits(), sys.root_ext().theta);
}

/// Unique ε in ℋ with ε*H = n (greedy, most significant digit first).
inline CoefficientFunction expand(const BigInt& n, const NumerationSystem& sys) {
  if (n < 1) throw std::domain_error("expand: n must be positive, got " + n.str());
  const PrincipalBlock& L = sys.block();
  const std::size_t m = sys.index_of(n);
  std::vector<Digit> digits(m, 0);
  BigInt r = n;
  BigInt q;
  detail::MembershipState st;
  for (std::size_t k = 1; k <= m; ++k) {
    const BigInt& h = sys.H(m - k + 1);
    const Digit bound = st.bound(L);
    Digit d = 0;
    if (r >= h) {
      q = r / h;
      d = q >= bound ? bound : q.convert_to<Digit>();
      r -= BigInt(d) * h;
    }
    digits[k - 1] = d;
    st.push(d, L);
  }
  CoefficientFunction eps(std::move(digits));
  if (r != 0 || !is_valid(eps, L)) {
    throw std::logic_error("expand: greedy expansion failed for n = " + n.str() + " in system " + L.to_string());
  }
  return eps;
}

/// First s digits of the expansion of n, without computing the rest.
/// Returns false when the expansion is shorter than s.
inline bool expand_prefix(const BigInt& n, std::size_t s, const NumerationSystem& sys, std::vector<Digit>& out) {
  const PrincipalBlock& L = sys.block();
  const std::size_t m = sys.index_of(n);
  if (m < s) return false;
  out.assign(s, 0);
  BigInt r = n;
  BigInt q;
  detail::MembershipState st;
  for (std::size_t k = 1; k <= s; ++k) {
    const BigInt& h = sys.H(m - k + 1);
    const Digit bound = st.bound(L);
    Digit d = 0;
    if (r >= h) {
      q = r / h;
      d = q >= bound ? bound : q.convert_to<Digit>();
      r -= BigInt(d) * h;
    }
    out[k - 1] = d;
    st.push(d, L);
  }
  return true;
}

enum class DeltaMethod { limit, formula };

/// Binet constant δ = lim H_n / ψ^n.
inline double binet_delta(const NumerationSystem& sys, DeltaMethod method = DeltaMethod::limit) {
  const auto& root = sys.root_ext();
  if (method == DeltaMethod::formula) return detail::delta_formula<ExtReal>(sys.block(), root.psi).convert_to<double>();
  ExtReal scale = root.theta;  // θ^n
  double prev = (ext(sys.H(1)) * scale).convert_to<double>();
  for (std::size_t n = 2; n <= 10000; ++n) {
    scale *= root.theta;
    const double cur = (ext(sys.H(n)) * scale).convert_to<double>();
    if (std::abs(cur - prev) < 1e-12) return cur;
    prev = cur;
  }
  throw std::logic_error("binet_delta: H_n / psi^n did not converge for block " + sys.id());
}

}  // namespace zeck
