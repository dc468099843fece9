#pragma once

#include "zeck/leading_blocks.hpp"
#include "zeck/system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zeck {

enum class ProfileKind { benford, line, piecewise_linear, power, custom };

/// Limit profile h∞ of a uniform continuation: an increasing homeomorphism
/// of [0,1]. The continuation it induces is h(n+p) = H_n + (H_{n+1}-H_n) h∞(p).
class LimitProfile {
 public:
  using Knot = std::pair<double, double>;

  static LimitProfile line() {
    LimitProfile p(ProfileKind::line, "line");
    return p;
  }

  static LimitProfile benford(const NumerationSystem& sys) {
    LimitProfile p(ProfileKind::benford, "benford");
    p.system_ = sys;
    return p;
  }

  static LimitProfile power(double exponent) {
    if (!(exponent > 0) || !std::isfinite(exponent)) {
      throw std::invalid_argument("power profile needs a positive exponent");
    }
    std::ostringstream name;
    name << "power:" << exponent;
    LimitProfile p(ProfileKind::power, name.str());
    p.exponent_ = exponent;
    return p;
  }

  /// Knots (p_k, h∞(p_k)) from (0,0) to (1,1), strictly increasing in both.
  static LimitProfile piecewise(std::vector<Knot> knots) {
    if (knots.size() < 2 || knots.front() != Knot{0.0, 0.0} || knots.back() != Knot{1.0, 1.0}) {
      throw std::invalid_argument("piecewise profile must run from (0,0) to (1,1)");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (!(knots[i].first > knots[i - 1].first) || !(knots[i].second > knots[i - 1].second)) {
        throw std::invalid_argument("piecewise profile knots must be strictly increasing (knot " + std::to_string(i) +
                                    ")");
      }
    }
    std::ostringstream name;
    name.precision(17);
    name << "piecewise";
    for (const auto& [x, y] : knots) name << ':' << x << ':' << y;
    LimitProfile p(ProfileKind::piecewise_linear, name.str());
    p.knots_ = std::make_shared<std::vector<Knot>>(std::move(knots));
    return p;
  }

  static LimitProfile custom(std::function<double(double)> forward, std::function<double(double)> inverse,
                             std::string name = "custom") {
    LimitProfile p(ProfileKind::custom, std::move(name));
    p.fwd_ = std::move(forward);
    p.inv_ = std::move(inverse);
    return p;
  }

  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Knot>& knots() const { return *knots_; }

  double forward(double p) const {
    switch (kind_) {
      case ProfileKind::line: return p;
      case ProfileKind::benford: return std::expm1(p * system_->log_psi()) / (system_->psi() - 1);
      case ProfileKind::power: return std::pow(p, exponent_);
      case ProfileKind::piecewise_linear: return interpolate(p, false);
      case ProfileKind::custom: return fwd_(p);
    }
    return p;
  }

  double inverse(double y) const {
    switch (kind_) {
      case ProfileKind::line: return y;
      case ProfileKind::benford: return std::log1p((system_->psi() - 1) * y) / system_->log_psi();
      case ProfileKind::power: return std::pow(y, 1 / exponent_);
      case ProfileKind::piecewise_linear: return interpolate(y, true);
      case ProfileKind::custom: return inv_(y);
    }
    return y;
  }

  ExtReal forward(const ExtReal& p) const {
    switch (kind_) {
      case ProfileKind::line: return p;
      case ProfileKind::benford: {
        const auto& r = system_->root_ext();
        return boost::multiprecision::expm1(p * system_->log_psi_ext()) / (r.psi - 1);
      }
      case ProfileKind::power: return boost::multiprecision::pow(p, ext(exponent_));
      case ProfileKind::piecewise_linear: return interpolate(p, false);
      case ProfileKind::custom: return ext(fwd_(p.convert_to<double>()));
    }
    return p;
  }

  ExtReal inverse(const ExtReal& y) const {
    switch (kind_) {
      case ProfileKind::line: return y;
      case ProfileKind::benford: {
        const auto& r = system_->root_ext();
        return boost::multiprecision::log1p((r.psi - 1) * y) / system_->log_psi_ext();
      }
      case ProfileKind::power: return boost::multiprecision::pow(y, ext(1.0) / ext(exponent_));
      case ProfileKind::piecewise_linear: return interpolate(y, true);
      case ProfileKind::custom: return ext(inv_(y.convert_to<double>()));
    }
    return y;
  }

 private:
  LimitProfile(ProfileKind k, std::string name) : kind_(k), name_(std::move(name)) {}

  template <class Real>
  Real interpolate(const Real& v, bool invert) const {
    const auto& K = *knots_;
    auto key = [invert](const Knot& k) { return invert ? k.second : k.first; };
    auto val = [invert](const Knot& k) { return invert ? k.first : k.second; };
    if (v <= Real(0)) return Real(0);
    if (v >= Real(1)) return Real(1);
    std::size_t lo = 0, hi = K.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (Real(key(K[mid])) <= v) lo = mid; else hi = mid;
    }
    const Real x0 = Real(key(K[lo])), x1 = Real(key(K[hi]));
    const Real y0 = Real(val(K[lo])), y1 = Real(val(K[hi]));
    return y0 + (y1 - y0) * (v - x0) / (x1 - x0);
  }

  ProfileKind kind_;
  std::string name_;
  std::optional<NumerationSystem> system_;
  double exponent_ = 1;
  std::shared_ptr<std::vector<Knot>> knots_;
  std::function<double(double)> fwd_;
  std::function<double(double)> inv_;
};

/// Profile whose inverse is the piecewise-linear interpolant of samples
/// (y_k, c_k) of an increasing map c on [0,1] with c(0) = 0, c(1) = 1.
inline LimitProfile profile_from_cdf(const std::vector<std::pair<double, double>>& samples) {
  std::vector<LimitProfile::Knot> knots;
  knots.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].first > samples[i - 1].first && samples[i].second > samples[i - 1].second)) {
      throw std::invalid_argument("profile_from_cdf: samples are not strictly increasing at index " +
                                  std::to_string(i));
    }
    knots.emplace_back(samples[i].second, samples[i].first);
  }
  return LimitProfile::piecewise(std::move(knots));
}

inline LimitProfile profile_from_cdf(const std::function<double(double)>& cdf, std::size_t knots = 1025) {
  if (knots < 2) throw std::invalid_argument("profile_from_cdf: need at least two knots");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(knots);
  for (std::size_t i = 0; i < knots; ++i) {
    const double y = i + 1 == knots ? 1.0 : static_cast<double>(i) / static_cast<double>(knots - 1);
    double c = cdf(y);
    if (i == 0) c = 0;
    if (i + 1 == knots) c = 1;
    samples.emplace_back(y, c);
  }
  return profile_from_cdf(samples);
}

/// Position of x in the continuation: x = h(n + p) with n = index, p in [0,1).
struct ContinuationPoint {
  std::size_t n = 0;
  double p = 0;

  double value() const { return static_cast<double>(n) + p; }
};

/// h^{-1}(x) for the continuation induced by a profile.
inline ContinuationPoint continuation_inverse(const BigInt& x, const LimitProfile& profile, const NumerationSystem& sys) {
  if (x < 1) throw std::domain_error("continuation inverse: x must be at least H_1 = 1, got " + x.str());
  const std::size_t n = sys.index_of(x);
  const BigInt& lo = sys.H(n);
  if (x == lo) return {n, 0.0};
  const double ratio = ratio_to_double(x - lo, sys.H(n + 1) - lo);
  double p = profile.inverse(ratio);
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  return {n, p};
}

/// The Benford continuation ℌ(n+p) = H_n + (H_{n+1}-H_n)(ψ^p - 1)/(ψ - 1).
class BenfordContinuation {
 public:
  explicit BenfordContinuation(NumerationSystem sys) : sys_(std::move(sys)), profile_(LimitProfile::benford(sys_)) {}

  const NumerationSystem& system() const { return sys_; }

  ExtReal operator()(const ExtReal& x) const {
    if (x < 1) throw std::domain_error("Benford continuation is defined on [1, inf)");
    const ExtReal whole = boost::multiprecision::floor(x);
    const std::size_t n = whole.convert_to<std::size_t>();
    const ExtReal p = x - whole;
    const ExtReal lo = ext(sys_.H(n));
    return lo + (ext(sys_.H(n + 1)) - lo) * profile_.forward(p);
  }

  double operator()(double x) const { return (*this)(ext(x)).convert_to<double>(); }

  ContinuationPoint inverse_point(const BigInt& x) const { return continuation_inverse(x, profile_, sys_); }

  double inverse(const BigInt& x) const { return inverse_point(x).value(); }

  double inverse(double x) const {
    if (!(x >= 1)) throw std::domain_error("Benford continuation inverse needs x >= 1");
    const ExtReal xe = ext(x);
    const BigInt whole = boost::multiprecision::floor(xe).convert_to<BigInt>();
    const std::size_t n = sys_.index_of(whole);
    const ExtReal lo = ext(sys_.H(n));
    const ExtReal ratio = (xe - lo) / (ext(sys_.H(n + 1)) - lo);
    return static_cast<double>(n) + profile_.inverse(ratio).convert_to<double>();
  }

  const LimitProfile& profile() const { return profile_; }

 private:
  NumerationSystem sys_;
  LimitProfile profile_;
};

/// benford_inverse(x) = ℌ^{-1}(x).
inline double benford_inverse(const BigInt& x, const NumerationSystem& sys) {
  return continuation_inverse(x, LimitProfile::benford(sys), sys).value();
}

/// The analytic Fibonacci continuation 𝔉(x) = α(φ^x + φ^{-x} cos(πx) φ^{-2}),
/// α = φ/√5, with 𝔉(n) = F_n for F_1 = 1, F_2 = 2.
class FibonacciAnalytic {
 public:
  long double operator()(long double x) const {
    return alpha_ * (std::pow(phi_, x) + std::pow(phi_, -x) * std::cos(pi_ * x) / (phi_ * phi_));
  }

  long double derivative(long double x) const {
    const long double lp = std::log(phi_);
    return alpha_ * (lp * std::pow(phi_, x) +
                     std::pow(phi_, -x) / (phi_ * phi_) * (-lp * std::cos(pi_ * x) - pi_ * std::sin(pi_ * x)));
  }

  /// 𝔉^{-1}(x) for x >= 1, by bisection on [n, n+1] with F_n <= x < F_{n+1}.
  long double inverse(const BigInt& x) const {
    if (x < 1) throw std::domain_error("analytic Fibonacci inverse needs x >= 1");
    const std::size_t n = fib_.index_of(x);
    if (n > 1000) throw std::domain_error("analytic Fibonacci inverse is limited to indices below 1000");
    const long double target = x.convert_to<long double>();
    long double lo = static_cast<long double>(n), hi = lo + 1;
    for (int i = 0; i < 80; ++i) {
      const long double mid = (lo + hi) / 2;
      if ((*this)(mid) <= target) lo = mid; else hi = mid;
    }
    return lo;
  }

 private:
  long double phi_ = (1 + std::sqrt(5.0L)) / 2;
  long double alpha_ = phi_ / std::sqrt(5.0L);
  long double pi_ = 3.141592653589793238462643383279502884L;
  NumerationSystem fib_{PrincipalBlock{1, 0}};
};

/// frac(h^{-1}(K_n)) for each term.
inline std::vector<double> fractional_parts(const std::vector<BigInt>& terms, const LimitProfile& profile,
                                            const NumerationSystem& sys) {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const BigInt& k : terms) out.push_back(continuation_inverse(k, profile, sys).p);
  return out;
}

/// Star discrepancy D*_N of a finite sample in [0,1).
inline double star_discrepancy(std::vector<double> values) {
  if (values.empty()) throw std::domain_error("star_discrepancy: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    d = std::max({d, static_cast<double>(i + 1) / n - values[i], values[i] - static_cast<double>(i) / n});
  }
  return d;
}

/// K_n = floor(H_{n'} + (H_{n'+1} - H_{n'}) h∞({nπ})), n' = n + offset.
/// Exact for the line profile at any size; other profiles are evaluated at
/// the working precision, so their floors are exact while H_{n'+1} - H_{n'}
/// stays well below 2^(precision - 64).
inline std::vector<BigInt> synthesize(const LimitProfile& profile, const NumerationSystem& sys, std::size_t count,
                                      std::size_t offset = 0) {
  if (count == 0) throw std::invalid_argument("synthesize: count must be at least 1");
  std::vector<BigInt> out;
  out.reserve(count);
  sys.reserve(count + offset + 2);
  for (std::size_t n = 1; n <= count; ++n) {
    const std::size_t idx = n + offset;
    const BigInt& lo = sys.H(idx);
    const BigInt width = sys.H(idx + 1) - lo;
    if (profile.kind() == ProfileKind::line) out.push_back(lo + floor_mul_frac_n_pi(width, n));
    else out.push_back(lo + floor_mul(width, profile.forward(frac_n_pi(n))));
  }
  return out;
}

/// h∞^{-1}((b̃·Ĥ - 1)/(ψ - 1)) - h∞^{-1}((b·Ĥ - 1)/(ψ - 1)).
inline double profile_probability(const LeadingBlock& b, const LimitProfile& profile) {
  const NumerationSystem& sys = b.system;
  if (b.s > 30) {
    const auto& r = sys.root_ext();
    const auto [gap, base] = block_gap<ExtReal>(b, r.theta);
    const ExtReal lo = (base - 1) / (r.psi - 1);
    const ExtReal hi = (base + gap - 1) / (r.psi - 1);
    return (profile.inverse(hi) - profile.inverse(lo)).convert_to<double>();
  }
  const auto [gap, base] = block_gap<double>(b, sys.theta());
  const double lo = (base - 1) / (sys.psi() - 1);
  const double hi = (base + gap - 1) / (sys.psi() - 1);
  return profile.inverse(hi) - profile.inverse(lo);
}

/// Piecewise profile agreeing with the Benford profile at log_ψ(b·Ĥ) for
/// every block b of ℋ_s and linear in between.
inline LimitProfile fake_benford_profile(const NumerationSystem& sys, std::size_t s) {
  const BlockFamily fam = enumerate_blocks(s, sys);
  const LimitProfile bf = LimitProfile::benford(sys);
  std::vector<LimitProfile::Knot> knots{{0.0, 0.0}};
  for (std::size_t k = 1; k < fam.size(); ++k) {
    const double p = std::log(dot_hat(fam.blocks[k], sys)) / sys.log_psi();
    knots.emplace_back(p, bf.forward(p));
  }
  knots.emplace_back(1.0, 1.0);
  return LimitProfile::piecewise(std::move(knots));
}

/// Prefix of the ℋ-expression μ of a real number in (0,1):
/// beta = Σ μ(k) θ^k with every window starting at a nonzero digit in ℋ
/// and no tail equal to Θ.
struct RealExpansion {
  std::vector<Digit> digits;
  std::size_t depth = 0;
  bool terminates = false;  // all digits past the last nonzero one are zero within the internal window
};

namespace detail {

inline std::size_t real_window(const NumerationSystem& sys) {
  const double bits_per_digit = std::log2(sys.psi());
  return static_cast<std::size_t>((ext_precision_bits() - 24) / bits_per_digit);
}

inline std::size_t real_guard(const NumerationSystem& sys) { return 2 * sys.N() + 8; }

}  // namespace detail

/// Largest depth real_expansion can certify at the current precision.
inline std::size_t max_real_depth(const NumerationSystem& sys) {
  return detail::real_window(sys) - detail::real_guard(sys);
}

inline RealExpansion real_expansion(const ExtReal& beta, const NumerationSystem& sys, std::size_t depth) {
  if (!(beta > 0) || !(beta < 1)) throw std::domain_error("real_expansion: beta must lie in (0,1)");
  if (depth == 0) throw std::invalid_argument("real_expansion: depth must be at least 1");
  const PrincipalBlock& L = sys.block();
  const std::size_t W = detail::real_window(sys);
  const std::size_t G = detail::real_guard(sys);
  depth = std::min(depth, W - G);
  const ExtReal& theta = sys.root_ext().theta;

  std::vector<Digit> mu(W, 0);
  std::vector<std::size_t> phase(W + 1, 0);
  ExtReal rem = beta;
  ExtReal pw = theta;
  for (std::size_t k = 0; k < W; ++k) {
    detail::MembershipState st{phase[k]};
    const Digit bound = st.bound(L);
    Digit d = 0;
    if (rem >= pw) {
      const ExtReal q = boost::multiprecision::floor(rem / pw);
      d = q >= bound ? bound : q.convert_to<Digit>();
      rem -= pw * d;
    }
    mu[k] = d;
    st.push(d, L);
    phase[k + 1] = st.phase;
    pw *= theta;
  }

  // A tail equal to Θ (from phase 0) sums to θ^{j-1}: carry it into the
  // digit before the tail.
  for (std::size_t j = 0; j <= depth; ++j) {
    if (phase[j] != 0) continue;
    bool run = true;
    for (std::size_t i = j; i < W && run; ++i) run = mu[i] == L.theta(i - j + 1);
    if (!run) continue;
    if (j == 0) throw std::domain_error("real_expansion: beta rounds to 1 at the current precision");
    ++mu[j - 1];
    std::fill(mu.begin() + j, mu.end(), 0);
    if (!detail::is_member(std::span<const Digit>(mu.data(), j), L, true)) {
      throw std::logic_error("real_expansion: carry produced an invalid expansion");
    }
    break;
  }

  RealExpansion out;
  out.depth = depth;
  std::size_t last = W;
  while (last > 0 && mu[last - 1] == 0) --last;
  out.terminates = last + G <= W;
  out.digits.assign(mu.begin(), mu.begin() + depth);
  return out;
}

inline RealExpansion real_expansion(double beta, const NumerationSystem& sys, std::size_t depth) {
  return real_expansion(ext(beta), sys, depth);
}

struct Concentration {
  LeadingBlock block;
  double c = 0;             // frac(log_ψ(a/δ))
  bool on_boundary = false; // c equals log_ψ(b·Ĥ) within the working precision
};

/// Block of ℋ_s on which LB_s(K_n) concentrates for K_n = a ψ^n (1 + o(1)):
/// the b with log_ψ(b·Ĥ) <= c < log_ψ(b̃·Ĥ), c = frac(ℌ^{-1}(aψ^n)) = frac(log_ψ(a/δ)).
inline Concentration concentration_block(const ExtReal& a, const NumerationSystem& sys, std::size_t s) {
  if (!(a > 0)) throw std::domain_error("concentration_block: a must be positive");
  if (s == 0) throw std::invalid_argument("concentration_block: s must be at least 1");
  const auto& r = sys.root_ext();
  const ExtReal c = frac(boost::multiprecision::log(a / r.delta) / sys.log_psi_ext());
  const ExtReal x = boost::multiprecision::exp(c * sys.log_psi_ext());
  const std::size_t depth = max_real_depth(sys);
  if (s >= depth) throw std::domain_error("concentration_block: s exceeds the depth certified at this precision");
  const RealExpansion mu = real_expansion(x * r.theta, sys, depth);
  if (mu.digits.front() == 0) throw std::logic_error("concentration_block: expansion of x·θ starts with 0");
  std::vector<Digit> head(mu.digits.begin(), mu.digits.begin() + s);
  head.resize(std::max(s, sys.N()), 0);
  bool boundary = mu.terminates;
  for (std::size_t k = s; k < mu.digits.size() && boundary; ++k) boundary = mu.digits[k] == 0;
  Concentration out{LeadingBlock{CoefficientFunction(std::move(head)), s, sys, false}, c.convert_to<double>(), boundary};
  if (!in_family(out.block.digits, s, sys)) throw std::logic_error("concentration_block: result is not a leading block");
  return out;
}

}  // namespace zeck
