#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <zeck/system.hpp>

#include <random>

using namespace zeck;

namespace {

const std::vector<std::vector<Digit>> kSystems = {{1, 0}, {1, 1}, {2, 1}, {3, 2, 1}, {9, 9}};

std::vector<BigInt> ints(std::initializer_list<long long> v) {
  std::vector<BigInt> out;
  for (long long x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("principal block validation") {
  CHECK_THROWS_AS(PrincipalBlock({1}), std::invalid_argument);
  CHECK_THROWS_AS(PrincipalBlock({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(PrincipalBlock::parse("1,x"), std::invalid_argument);
  CHECK_THROWS_WITH(PrincipalBlock::parse("1,,0"), Catch::Matchers::ContainsSubstring("''"));
  const PrincipalBlock L = PrincipalBlock::parse("3, 2,1");
  CHECK(L.size() == 3);
  CHECK(L.theta(4) == 3);
  CHECK(L.theta(6) == 1);
  CHECK(L.to_string() == "3,2,1");
}

TEST_CASE("fundamental sequence examples") {
  CHECK(fundamental_sequence(NumerationSystem({1, 0}), 6) == ints({1, 2, 3, 5, 8, 13}));
  CHECK(fundamental_sequence(NumerationSystem({9, 9}), 4) == ints({1, 10, 100, 1000}));
  CHECK(fundamental_sequence(NumerationSystem({3, 2, 1}), 6) == ints({1, 4, 15, 55, 203, 749}));
  CHECK(fundamental_sequence(NumerationSystem({1, 1}), 6) == ints({1, 2, 4, 8, 16, 32}));
  CHECK(fundamental_sequence(NumerationSystem({2, 1}), 6) == ints({1, 3, 8, 22, 60, 164}));
  CHECK_THROWS_AS(fundamental_sequence(NumerationSystem({1, 0}), 0), std::invalid_argument);
}

TEST_CASE("fundamental sequence agrees with counting valid tuples") {
  for (const auto& L : kSystems) {
    const std::size_t count = L == std::vector<Digit>{9, 9} ? 5 : 9;
    const auto expected = oracle::H_by_counting(L, count);
    CHECK(fundamental_sequence(NumerationSystem(PrincipalBlock(L)), count) == expected);
  }
}

TEST_CASE("fundamental sequence satisfies both recursion clauses") {
  for (const auto& Lv : kSystems) {
    const NumerationSystem sys{PrincipalBlock(Lv)};
    const PrincipalBlock& L = sys.block();
    const std::size_t N = L.size();
    for (std::size_t n = 1; n <= N + 1; ++n) {
      BigInt v = 1;
      for (std::size_t k = 1; k < n; ++k) v += BigInt(L[k]) * sys.H(n - k);
      CHECK(sys.H(n) == v);
    }
    for (std::size_t n = 1; n <= 1500; ++n) {
      BigInt v = 0;
      for (std::size_t k = 1; k < N; ++k) v += BigInt(L[k]) * sys.H(n + N - k);
      v += BigInt(1 + L[N]) * sys.H(n);
      REQUIRE(sys.H(n + N) == v);
      REQUIRE(sys.H(n + 1) > sys.H(n));
    }
  }
}

TEST_CASE("fundamental table is shared and grows on demand") {
  const NumerationSystem a({1, 0});
  const NumerationSystem b = a;
  const BigInt& big = a.H(3000);
  CHECK(b.H(3000) == big);
  CHECK(&b.H(3000) == &big);
  CHECK(a.H(3001) == a.H(3000) + a.H(2999));
}

TEST_CASE("membership examples") {
  const PrincipalBlock L{3, 2, 1};
  CHECK(is_valid({3, 2, 0}, L));
  CHECK(is_valid({3, 1, 3, 2, 0}, L));
  CHECK_FALSE(is_valid({3, 2, 2}, L));
  CHECK(is_valid({3, 2, 1, 3, 2, 1}, L));
  CHECK_FALSE(is_valid({1, 1}, PrincipalBlock{1, 0}));
  CHECK_FALSE(is_valid({0, 1}, PrincipalBlock{1, 0}));
  CHECK_FALSE(is_valid({}, PrincipalBlock{1, 0}));
}

TEST_CASE("membership matches the literal recursion") {
  for (const auto& Lv : kSystems) {
    const PrincipalBlock L(Lv);
    const Digit maxd = L.max_digit() + 1;
    const std::size_t max_len = maxd > 3 ? 4 : 7;
    std::vector<Digit> cur;
    std::function<void()> walk = [&] {
      if (!cur.empty()) REQUIRE(is_valid(CoefficientFunction(cur), L) == oracle::in_H(cur, Lv));
      if (cur.size() == max_len) return;
      for (Digit d = 0; d <= maxd; ++d) {
        cur.push_back(d);
        walk();
        cur.pop_back();
      }
    };
    walk();
  }
}

TEST_CASE("Fibonacci membership is the classical Zeckendorf condition up to length 15") {
  const PrincipalBlock L{1, 0};
  for (std::size_t len = 1; len <= 15; ++len) {
    const std::size_t total = static_cast<std::size_t>(std::pow(3.0, std::min<double>(len, 9)));
    std::mt19937_64 rng(len);
    // Exhaustive over {0,1,2}^len while small, random tuples beyond that.
    for (std::size_t i = 0; i < (len <= 9 ? total : 20000); ++i) {
      std::vector<Digit> eps(len);
      std::size_t code = i;
      for (auto& d : eps) {
        if (len <= 9) {
          d = static_cast<Digit>(code % 3);
          code /= 3;
        } else {
          d = static_cast<Digit>(rng() % 3);
        }
      }
      REQUIRE(is_valid(CoefficientFunction(eps), L) == oracle::fib_legal(eps));
    }
    // All binary tuples of this length are cheap enough to cover exhaustively.
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      std::vector<Digit> eps(len);
      for (std::size_t k = 0; k < len; ++k) eps[k] = (mask >> (len - 1 - k)) & 1;
      REQUIRE(is_valid(CoefficientFunction(eps), L) == oracle::fib_legal(eps));
    }
  }
}

TEST_CASE("expand examples") {
  CHECK(expand(BigInt(243), NumerationSystem({1, 0})) ==
        CoefficientFunction{1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
  CHECK(expand(BigInt(213), NumerationSystem({9, 9})) == CoefficientFunction{2, 1, 3});
  CHECK(expand(BigInt(55), NumerationSystem({3, 2, 1})) == CoefficientFunction{1, 0, 0, 0});
  CHECK(expand(BigInt(243), NumerationSystem({1, 0})).compact() == "100000010010");
  CHECK_THROWS_AS(expand(BigInt(0), NumerationSystem({1, 0})), std::domain_error);
  CHECK_THROWS_AS(expand(BigInt(-4), NumerationSystem({1, 0})), std::domain_error);
}

TEST_CASE("evaluate_conv and evaluate_dot") {
  const NumerationSystem fib({1, 0});
  CHECK(evaluate_conv(CoefficientFunction{1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}, fib) == 243);
  CHECK(evaluate_conv(CoefficientFunction{1}, NumerationSystem({3, 2, 1})) == 1);
  const NumerationSystem tens({9, 9});
  CHECK(evaluate_conv(CoefficientFunction{4, 1, 6, 2}, tens) == 4000 + 100 + 60 + 2);
  const std::vector<double> Q{10, 100, 1000, 10000};
  CHECK(evaluate_dot<double>(CoefficientFunction{4, 1, 6, 2}, Q) == 4 * 10 + 100 + 6 * 1000 + 2 * 10000);
  const double w = 2.0 / (1 + std::sqrt(5.0));
  const std::vector<double> hat{1, w, w * w};
  CHECK(evaluate_dot<double>(CoefficientFunction{1, 0, 0}, hat) == 1.0);
  CHECK(evaluate_dot<double>(CoefficientFunction{1, 0, 1}, hat) == Catch::Approx((5 - std::sqrt(5.0)) / 2).epsilon(1e-14));
  CHECK(dot_hat(CoefficientFunction{1, 0, 1}, fib) == Catch::Approx(1.381966011250105).epsilon(1e-13));
  CHECK_THROWS_AS(evaluate_dot<double>(CoefficientFunction{1, 0, 1, 0}, hat), std::invalid_argument);
}

TEST_CASE("round trip for n up to 1e5 on every test system") {
  for (const auto& Lv : kSystems) {
    const NumerationSystem sys{PrincipalBlock(Lv)};
    CoefficientFunction prev;
    for (long long n = 1; n <= 100000; ++n) {
      const CoefficientFunction eps = expand(BigInt(n), sys);
      REQUIRE(evaluate_conv(eps, sys) == n);
      REQUIRE(sys.H(eps.len()) <= n);
      REQUIRE(n < sys.H(eps.len() + 1));
      // (length, lexicographic) order is monotone in n.
      if (n > 1) REQUIRE((eps.len() > prev.len() || (eps.len() == prev.len() && prev < eps)));
      prev = eps;
    }
  }
}

TEST_CASE("brute-force uniqueness up to 1e4") {
  for (const auto& Lv : std::vector<std::vector<Digit>>{{1, 0}, {3, 2, 1}, {1, 1}, {2, 1}}) {
    const NumerationSystem sys{PrincipalBlock(Lv)};
    const auto H = fundamental_sequence(sys, 40);
    const BigInt limit = 10000;
    const auto reps = oracle::all_representations(Lv, H, limit);
    REQUIRE(reps.size() == 10000);
    for (const auto& [value, list] : reps) {
      REQUIRE(list.size() == 1);
      REQUIRE(expand(value, sys).digits() == list.front());
    }
  }
}

TEST_CASE("large values round trip") {
  std::mt19937_64 rng(7);
  for (const auto& Lv : kSystems) {
    const NumerationSystem sys{PrincipalBlock(Lv)};
    for (int i = 0; i < 200; ++i) {
      BigInt n = 1;
      const int words = 1 + static_cast<int>(rng() % 20);
      for (int w = 0; w < words; ++w) n = (n << 64) + BigInt(rng());
      const auto eps = expand(n, sys);
      REQUIRE(is_valid(eps, sys.block()));
      REQUIRE(evaluate_conv(eps, sys) == n);
      std::vector<Digit> head;
      REQUIRE(expand_prefix(n, 5, sys, head));
      REQUIRE(head == eps.prefix(5).digits());
    }
  }
}
