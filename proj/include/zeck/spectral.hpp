#pragma once

#include "zeck/block.hpp"
#include "zeck/numeric.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeck {

/// Integer polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<std::int64_t> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  template <class Real>
  Real operator()(const Real& x) const {
    Real acc = Real(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + Real(static_cast<long long>(coeffs[i]));
    return acc;
  }

  Polynomial derivative() const {
    Polynomial d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * static_cast<std::int64_t>(i));
    return d;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      const std::int64_t c = coeffs[i];
      if (c == 0) continue;
      const std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-c) : static_cast<std::uint64_t>(c);
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || i == 0) out += std::to_string(mag);
      if (i >= 1) out += "x";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// g_L(x) = x^N - Σ_{k<N} a_k x^{N-k} - (1 + a_N).
inline Polynomial characteristic_polynomial(const PrincipalBlock& L) {
  const std::size_t N = L.size();
  Polynomial g;
  g.coeffs.assign(N + 1, 0);
  g.coeffs[N] = 1;
  for (std::size_t k = 1; k < N; ++k) g.coeffs[N - k] = -static_cast<std::int64_t>(L[k]);
  g.coeffs[0] = -(1 + static_cast<std::int64_t>(L[N]));
  return g;
}

template <class Real>
struct DominantRoot {
  Real psi;
  Real theta;
  Real delta;
  Real tol;
};

namespace detail {

template <class Real>
Real abs_of(const Real& x) {
  using std::abs;
  using boost::multiprecision::abs;
  return abs(x);
}

// Coefficients of g(x)/(x - psi), ascending, by synthetic division.
template <class Real>
std::vector<Real> deflate(const Polynomial& g, const Real& psi) {
  const std::size_t n = g.degree();
  std::vector<Real> q(n, Real(0));
  q[n - 1] = Real(static_cast<long long>(g.coeffs[n]));
  for (std::size_t i = n - 1; i > 0; --i) q[i - 1] = Real(static_cast<long long>(g.coeffs[i])) + psi * q[i];
  return q;
}

// δ = (1/(ψ g'(ψ))) Σ_k H_k q_{k-1}; the Taylor coefficient of the quotient
// at 0 of order k-1 is exactly its (k-1)-th ascending coefficient.
template <class Real>
Real delta_formula(const PrincipalBlock& L, const Real& psi) {
  const Polynomial g = characteristic_polynomial(L);
  const std::vector<Real> q = deflate(g, psi);
  const std::vector<BigInt> H = fundamental_values(L, L.size());
  Real sum = Real(0);
  for (std::size_t k = 1; k <= L.size(); ++k) sum += Real(H[k - 1].template convert_to<long double>()) * q[k - 1];
  return sum / (psi * g.derivative()(psi));
}

template <>
inline ExtReal delta_formula<ExtReal>(const PrincipalBlock& L, const ExtReal& psi) {
  const Polynomial g = characteristic_polynomial(L);
  const std::vector<ExtReal> q = deflate(g, psi);
  const std::vector<BigInt> H = fundamental_values(L, L.size());
  ExtReal sum = ext(0.0);
  for (std::size_t k = 1; k <= L.size(); ++k) sum += ext(H[k - 1]) * q[k - 1];
  return sum / (psi * g.derivative()(psi));
}

template <class Real>
Real default_tolerance() {
  if constexpr (std::is_floating_point_v<Real>) {
    return Real(1e-15) > std::numeric_limits<Real>::epsilon() * 8 ? Real(1e-15)
                                                                    : std::numeric_limits<Real>::epsilon() * 8;
  } else {
    return boost::multiprecision::ldexp(ext(1.0), -static_cast<int>(ext_precision_bits()) + 8);
  }
}

}  // namespace detail

/// Dominant zero ψ of g_L: bracket (1, 2 + Σa], 60 bisection steps, then Newton.
template <class Real = double>
DominantRoot<Real> dominant_zero(const PrincipalBlock& L, Real tol = detail::default_tolerance<Real>()) {
  if constexpr (!std::is_floating_point_v<Real>) ext_precision_bits();
  if (!(tol > 0)) throw std::invalid_argument("dominant_zero: tolerance must be positive");
  const Polynomial g = characteristic_polynomial(L);
  const Polynomial dg = g.derivative();
  Real lo = Real(1);
  Real hi = Real(static_cast<long long>(L.digit_sum() + 2));
  if (!(g(lo) < 0) || !(g(hi) > 0)) {
    throw std::logic_error("dominant_zero: no sign change on the bracket for block " + L.to_string());
  }
  for (int i = 0; i < 60; ++i) {
    const Real mid = (lo + hi) / 2;
    if (g(mid) < 0) lo = mid; else hi = mid;
  }
  Real x = (lo + hi) / 2;
  for (int i = 0; i < 200; ++i) {
    const Real step = g(x) / dg(x);
    x -= step;
    if (detail::abs_of(step) < tol) break;
  }
  const Real residual = detail::abs_of(g(x));
  DominantRoot<Real> r{x, Real(1) / x, Real(0), residual > tol ? residual : tol};
  r.delta = detail::delta_formula(L, x);
  return r;
}

}  // namespace zeck
