#pragma once

#include "zeck/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zeck {

using Digit = std::uint32_t;

namespace detail {

inline std::vector<Digit> parse_digit_list(std::string_view text, std::string_view what) {
  std::vector<Digit> out;
  if (text.empty()) throw std::invalid_argument(std::string(what) + ": empty digit list");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty() || token.size() > 9 ||
        !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument(std::string(what) + ": malformed digit '" + std::string(token) +
                                  "' in '" + std::string(text) + "'");
    }
    out.push_back(static_cast<Digit>(std::stoul(std::string(token))));
    pos = comma + 1;
  }
  return out;
}

inline std::string join_digits(std::span<const Digit> digits) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(digits[i]);
  }
  return out;
}

}  // namespace detail

/// The principal maximal block L = (a_1, ..., a_N).
class PrincipalBlock {
 public:
  PrincipalBlock(std::initializer_list<Digit> entries) : PrincipalBlock(std::vector<Digit>(entries)) {}

  explicit PrincipalBlock(std::vector<Digit> entries) : a_(std::move(entries)) {
    if (a_.size() < 2) {
      throw std::invalid_argument("principal block needs at least two entries, got '" +
                                  detail::join_digits(a_) + "'");
    }
    if (a_.front() == 0) {
      throw std::invalid_argument("principal block must start with a positive entry, got '" +
                                  detail::join_digits(a_) + "'");
    }
  }

  static PrincipalBlock parse(std::string_view text) {
    return PrincipalBlock(detail::parse_digit_list(text, "principal block"));
  }

  std::size_t size() const { return a_.size(); }

  // 1-based a_k.
  Digit operator[](std::size_t k) const { return a_[k - 1]; }

  // Periodic extension Θ(k) = a_{((k-1) mod N)+1}, 1-based.
  Digit theta(std::size_t k) const { return a_[(k - 1) % a_.size()]; }

  Digit max_digit() const { return *std::max_element(a_.begin(), a_.end()); }

  std::uint64_t digit_sum() const {
    std::uint64_t s = 0;
    for (Digit d : a_) s += d;
    return s;
  }

  const std::vector<Digit>& entries() const { return a_; }
  std::string to_string() const { return detail::join_digits(a_); }

  friend bool operator==(const PrincipalBlock&, const PrincipalBlock&) = default;

 private:
  std::vector<Digit> a_;
};

/// Finite digit tuple, most significant first, 1-based access.
class CoefficientFunction {
 public:
  CoefficientFunction() = default;
  CoefficientFunction(std::initializer_list<Digit> digits) : d_(digits) {}
  explicit CoefficientFunction(std::vector<Digit> digits) : d_(std::move(digits)) {}

  static CoefficientFunction parse(std::string_view text) {
    return CoefficientFunction(detail::parse_digit_list(text, "coefficient function"));
  }

  std::size_t len() const { return d_.size(); }
  bool empty() const { return d_.empty(); }
  Digit operator()(std::size_t k) const { return d_[k - 1]; }
  Digit& operator()(std::size_t k) { return d_[k - 1]; }

  const std::vector<Digit>& digits() const { return d_; }
  std::vector<Digit>& digits() { return d_; }

  CoefficientFunction prefix(std::size_t s) const {
    return CoefficientFunction(std::vector<Digit>(d_.begin(), d_.begin() + std::min(s, d_.size())));
  }

  CoefficientFunction padded(std::size_t length) const {
    std::vector<Digit> out = d_;
    if (out.size() < length) out.resize(length, 0);
    return CoefficientFunction(std::move(out));
  }

  std::string to_string() const { return detail::join_digits(d_); }

  // Concatenated digits when every digit is a single decimal digit.
  std::string compact() const {
    if (std::any_of(d_.begin(), d_.end(), [](Digit d) { return d > 9; })) return to_string();
    std::string out;
    for (Digit d : d_) out += static_cast<char>('0' + d);
    return out;
  }

  friend bool operator==(const CoefficientFunction&, const CoefficientFunction&) = default;
  friend auto operator<=>(const CoefficientFunction& a, const CoefficientFunction& b) {
    return a.d_ <=> b.d_;
  }

 private:
  std::vector<Digit> d_;
};

namespace detail {

// Membership automaton. `phase` counts how many leading digits of the current
// ℋ° segment agree with Θ. A digit below Θ(phase+1) closes the segment.
struct MembershipState {
  std::size_t phase = 0;

  Digit bound(const PrincipalBlock& L) const { return L.theta(phase + 1); }

  bool push(Digit d, const PrincipalBlock& L) {
    const Digit b = bound(L);
    if (d > b) return false;
    phase = (d == b) ? (phase + 1) % L.size() : 0;
    return true;
  }
};

inline bool is_member(std::span<const Digit> digits, const PrincipalBlock& L, bool allow_leading_zero) {
  if (digits.empty()) return false;
  if (!allow_leading_zero && digits.front() == 0) return false;
  MembershipState st;
  for (Digit d : digits) {
    if (!st.push(d, L)) return false;
  }
  return true;
}

}  // namespace detail

/// True iff the candidate belongs to the periodic Zeckendorf collection of L.
inline bool is_valid(const CoefficientFunction& candidate, const PrincipalBlock& L) {
  return detail::is_member(candidate.digits(), L, false);
}

/// H_1..H_count straight from the two recursion clauses.
inline std::vector<BigInt> fundamental_values(const PrincipalBlock& L, std::size_t count) {
  const std::size_t N = L.size();
  std::vector<BigInt> H;
  H.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    BigInt v;
    if (n <= N + 1) {
      v = 1;
      for (std::size_t k = 1; k < n; ++k) v += BigInt(L[k]) * H[n - k - 1];
    } else {
      const std::size_t base = n - N;  // H_{base+N} = Σ a_k H_{base+N-k} + H_base
      for (std::size_t k = 1; k <= N; ++k) v += BigInt(L[k]) * H[n - k - 1];
      v += H[base - 1];
    }
    H.push_back(std::move(v));
  }
  return H;
}

}  // namespace zeck
