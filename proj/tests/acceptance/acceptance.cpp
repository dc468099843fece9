// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <zeck/continuation.hpp>
#include <zeck/experiments.hpp>
#include <zeck/leading_blocks.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace zeck;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

struct Verdict {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [" << what << "]";
    }
  }
};

void criterion(const char* id, double limit_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.ok = false;
    v.note << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= limit_s) {
    v.ok = false;
    v.note << " [time " << secs << "s >= " << limit_s << "s]";
  }
  if (!v.ok) ++failures;
  std::printf("%s %s (%.2fs)%s\n", v.ok ? "PASS" : "FAIL", id, secs, v.note.str().c_str());
  std::fflush(stdout);
}

std::vector<BigInt> big(std::initializer_list<long long> xs) {
  std::vector<BigInt> out;
  for (long long x : xs) out.emplace_back(x);
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const NumerationSystem kFib({1, 0});
const NumerationSystem kBin({1, 1});

std::vector<NumerationSystem> systems() {
  return {kFib, kBin, NumerationSystem({2, 1}), NumerationSystem({3, 2, 1}), NumerationSystem({9, 9})};
}

double prob(std::initializer_list<Digit> d, const NumerationSystem& sys) {
  return benford_probability(make_block(CoefficientFunction(d), sys));
}

}  // namespace

int main() {
  criterion("1 golden sequences", 4.0, [](Verdict& v) {
    auto timed = [&](const char* what, auto make, const std::vector<BigInt>& expect) {
      const auto t0 = Clock::now();
      const auto got = make();
      v.require(got == expect, std::string(what) + " mismatch");
      v.require(std::chrono::duration<double>(Clock::now() - t0).count() < 1.0, std::string(what) + " >= 1s");
    };
    timed("a", [] { return fundamental_sequence(kFib, 15); },
          big({1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987}));
    timed("b", [] { return synthesize(LimitProfile::line(), kFib, 10); }, big({1, 2, 3, 6, 11, 19, 33, 36, 64, 111}));
    timed("c", [] { return synthesize(LimitProfile::line(), NumerationSystem({9, 9}), 10, 1); },
          big({22, 354, 4823, 60973, 737166, 8646003, 99203371, 219467105, 3469004940LL, 47433388230LL}));
    timed("d", [] { return generate(SequenceSpec::floor_geometric("phi/sqrt5", BigRational(89, 55)), 15); },
          big({1, 1, 3, 4, 8, 12, 21, 34, 55, 89, 144, 233, 377, 610, 988}));
  });

  criterion("2 theoretical probabilities", 1.0, [](Verdict& v) {
    const struct {
      std::initializer_list<Digit> block;
      const NumerationSystem* sys;
      double printed;
    } cases[] = {{{1, 0, 0}, &kFib, 0.672},          {{1, 0, 1}, &kFib, 0.328},
                 {{1, 0, 0, 0, 1, 0}, &kFib, 0.157}, {{1, 0, 1, 0, 1, 0}, &kFib, 0.119},
                 {{1, 0, 0}, &kBin, 0.322},          {{1, 0, 1}, &kBin, 0.264}};
    for (const auto& c : cases) {
      const double p = prob(c.block, *c.sys);
      v.require(std::abs(p - c.printed) <= 1e-3, "got " + fmt(p) + " for " + fmt(c.printed));
    }
  });

  criterion("3 probability normalization", 5.0, [](Verdict& v) {
    // Cells are walked in order of family size until the time budget is spent.
    struct Cell {
      NumerationSystem sys;
      std::size_t s;
      BigInt size;
    };
    std::vector<Cell> cells;
    for (const auto& sys : systems()) {
      for (std::size_t s = 2; s <= 20; ++s) cells.push_back({sys, s, family_size(s, sys)});
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.size < b.size; });
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::milliseconds(4500);
    std::size_t done = 0;
    double worst = 0, walked = 0;
    std::string first_missing;
    for (const auto& c : cells) {
      const auto now = Clock::now();
      const double left = std::chrono::duration<double>(deadline - now).count();
      const double spent = std::chrono::duration<double>(now - start).count();
      // Skip cells that cannot finish at the throughput seen so far.
      const double rate = walked > 1e6 ? walked / spent : 1e7;
      if (left <= 0 || c.size > BigInt(static_cast<std::uint64_t>(left * rate))) {
        if (first_missing.empty()) first_missing = c.sys.id() + " s=" + std::to_string(c.s) + " (" + c.size.str() + " blocks)";
        continue;
      }
      const auto t = probability_total(c.s, c.sys, c.size.convert_to<std::uint64_t>());
      walked += t.blocks.convert_to<double>();
      if (!t.complete) continue;
      worst = std::max(worst, std::abs(t.total - 1));
      ++done;
    }
    v.require(worst <= 1e-10, "residual " + fmt(worst));
    v.require(done == cells.size(), std::to_string(done) + "/" + std::to_string(cells.size()) +
                                        " cells summed, smallest missing " + first_missing);
    v.note << " cells " << done << "/" << cells.size() << ", max residual " << fmt(worst);
  });

  criterion("4 round trip and uniqueness", 60.0, [](Verdict& v) {
    for (const auto& sys : systems()) {
      for (long long n = 1; n <= 100000; ++n) {
        if (evaluate_conv(expand(BigInt(n), sys), sys) != n) {
          v.require(false, sys.id() + " round trip at " + std::to_string(n));
          break;
        }
      }
    }
    for (const auto& Lv : std::vector<std::vector<Digit>>{{1, 0}, {3, 2, 1}}) {
      const NumerationSystem sys{PrincipalBlock(Lv)};
      const auto reps = oracle::all_representations(Lv, fundamental_sequence(sys, 40), BigInt(10000));
      bool ok = reps.size() == 10000;
      for (const auto& [value, list] : reps) ok = ok && list.size() == 1 && expand(value, sys).digits() == list.front();
      v.require(ok, sys.id() + " uniqueness");
    }
  });

  criterion("5 empirical strong Benford", 30.0, [](Verdict& v) {
    for (std::size_t s : {3, 6}) {
      const auto r = empirical_block_frequency(SequenceSpec::power(2), kFib, s, 5000);
      v.require(r.max_deviation <= 0.02, "s=" + std::to_string(s) + " deviation " + fmt(r.max_deviation));
      v.note << " s=" << s << " max deviation " << fmt(r.max_deviation) << ";";
    }
  });

  criterion("6 Lucas concentration", 10.0, [](Verdict& v) {
    const CoefficientFunction target{1, 0, 0, 0, 1, 0, 0, 0, 1, 0};
    const auto r = empirical_block_frequency(SequenceSpec::lucas(), kFib, 10, 2000);
    double freq = 0;
    std::string top;
    double top_freq = 0;
    for (const auto& f : r.blocks) {
      if (f.block == target) freq = f.empirical;
      if (f.empirical > top_freq) top_freq = f.empirical, top = f.block.to_string();
    }
    v.require(freq >= 0.99, "(1,0,0,0,1,0,0,0,1,0) frequency " + fmt(freq) + ", dominant block (" + top + ") at " +
                                fmt(top_freq));
    const auto c = concentration_block(parse_real("omega"), kFib, 9);
    v.require(c.block.digits == CoefficientFunction{1, 0, 0, 0, 1, 0, 0, 0, 1},
              "concentration_block(9) = (" + c.block.digits.to_string() + ")");
  });

  criterion("7 oscillation", 120.0, [](Verdict& v) {
    const auto one = oscillation_scan(1, make_block(CoefficientFunction{1, 0, 0}, kFib), 20, 30);
    v.require(std::abs(one.empirical_max - 0.724) <= 0.02, "a=1 max " + fmt(one.empirical_max));
    v.require(std::abs(one.empirical_min - 0.618) <= 0.02, "a=1 min " + fmt(one.empirical_min));
    const auto two = oscillation_scan(2, make_block(CoefficientFunction{1, 0, 0, 0, 1, 0}, kFib), 20, 30);
    v.require(std::abs(two.empirical_max - 0.1737) <= 0.02, "a=2 max " + fmt(two.empirical_max));
    v.require(std::abs(two.empirical_min - 0.1419) <= 0.02, "a=2 min " + fmt(two.empirical_min));
    v.note << " a=1 " << fmt(one.empirical_max) << "/" << fmt(one.empirical_min) << ", a=2 " << fmt(two.empirical_max)
           << "/" << fmt(two.empirical_min);
  });

  criterion("8 within-expansion", 60.0, [](Verdict& v) {
    const auto b = make_block(CoefficientFunction{1, 0, 1}, kFib);
    const auto t20 = within_expansion(kBin, b, 20, 0.05, 10000);
    const auto t40 = within_expansion(kBin, b, 40, 0.05, 10000);
    v.require(t40.fraction >= 0.9, "fraction at t=40 is " + fmt(t40.fraction));
    v.require(t40.fraction > t20.fraction, "t=40 " + fmt(t40.fraction) + " <= t=20 " + fmt(t20.fraction));
    v.note << " fraction t=20 " << fmt(t20.fraction) << ", t=40 " << fmt(t40.fraction) << ", mean P_40 "
           << fmt(t40.mean);
  });

  criterion("9 equidistribution", 30.0, [](Verdict& v) {
    const auto bf = LimitProfile::benford(kFib);
    const double d_pow = star_discrepancy(fractional_parts(generate(SequenceSpec::power(2), 10000), bf, kFib));
    const double d_luc = star_discrepancy(fractional_parts(generate(SequenceSpec::lucas(), 10000), bf, kFib));
    v.require(d_pow < 0.02, "2^n discrepancy " + fmt(d_pow));
    v.require(d_luc > 0.3, "Lucas discrepancy " + fmt(d_luc));
    v.note << " 2^n " << fmt(d_pow) << ", Lucas " << fmt(d_luc);
  });

  criterion("10 continuation falsifier", 10.0, [](Verdict& v) {
    const auto fake = fake_benford_profile(kFib, 4);
    double at4 = 0, at6 = 0;
    for (const auto& d : enumerate_blocks(4, kFib).blocks) {
      const auto b = make_block(d, 4, kFib);
      at4 = std::max(at4, std::abs(profile_probability(b, fake) - benford_probability(b)));
    }
    for (const auto& d : enumerate_blocks(6, kFib).blocks) {
      const auto b = make_block(d, 6, kFib);
      at6 = std::max(at6, std::abs(profile_probability(b, fake) - benford_probability(b)));
    }
    v.require(at4 <= 1e-10, "s=4 difference " + fmt(at4));
    v.require(at6 > 1e-3, "s=6 difference " + fmt(at6));
    v.note << " s=4 " << fmt(at4) << ", s=6 " << fmt(at6);
  });

  criterion("11 spectral cross-check", 1.0, [](Verdict& v) {
    double worst_delta = 0, worst_theta = 0;
    for (const auto& sys : systems()) {
      worst_delta = std::max(worst_delta, std::abs(binet_delta(sys, DeltaMethod::limit) -
                                                   binet_delta(sys, DeltaMethod::formula)));
      const auto& L = sys.block();
      const double th = sys.theta();
      double s = 0;
      for (std::size_t k = 1; k < L.size(); ++k) s += L[k] * std::pow(th, static_cast<double>(k));
      s += (1 + L[L.size()]) * std::pow(th, static_cast<double>(L.size()));
      worst_theta = std::max(worst_theta, std::abs(s - 1));
    }
    v.require(worst_delta <= 1e-9, "delta disagreement " + fmt(worst_delta));
    v.require(worst_theta < 1e-12, "theta residual " + fmt(worst_theta));
    v.note << " delta " << fmt(worst_delta) << ", theta " << fmt(worst_theta);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
