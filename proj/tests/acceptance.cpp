// Acceptance checks, one line per criterion. Exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "steptunnel/pauli.hpp"
#include "steptunnel/potential.hpp"
#include "steptunnel/resonance.hpp"
#include "steptunnel/scan.hpp"
#include "steptunnel/scattering.hpp"
#include "test_support.hpp"

using namespace steptunnel;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome pauli_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240501);
  double fold_vs_direct = 0;
  double explicit_err = 0;
  for (std::size_t n : {2u, 5u, 20u, 200u, 2000u}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<PauliVectorD> chain;
      chain.reserve(n);
      for (std::size_t k = 0; k < n; ++k) chain.push_back(test::random_pauli(rng, 1.0));
      const auto folded = fold_chain(chain);
      const auto direct = test::direct_product(chain);
      fold_vs_direct = std::max(fold_vs_direct, test::scaled_rel_diff(folded, direct));
      if (n <= 8) {
        const auto expanded = to_matrix(explicit_product(chain));
        explicit_err = std::max(explicit_err, test::scaled_rel_diff(expanded, 0.0, to_matrix(folded.vector), folded.log_scale));
        explicit_err = std::max(explicit_err, test::scaled_rel_diff(expanded, 0.0, direct.m, direct.log_scale));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {fold_vs_direct < 1e-10 && explicit_err < 1e-12 && elapsed < 10,
          fmt("fold vs direct max rel %.2e (< 1e-10), explicit max rel %.2e (< 1e-12), %.2f s (< 10 s)",
              fold_vs_direct, explicit_err, elapsed)};
}

Outcome pauli_table() {
  int exact = 0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const int r = phi(p, q);
      const ComplexMatrix2D lhs = pauli_matrix<double>(q) * pauli_matrix<double>(r);
      const ComplexMatrix2D rhs = i_pow<double>(epsilon(p, q, r)) * pauli_matrix<double>(p);
      if (lhs == rhs) ++exact;
    }
  return {exact == 16, fmt("%d of 16 pairs exact", exact)};
}

Outcome conservation() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> energy(0.01, 120.0);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = test::random_barrier(rng, 100, -50, 80);
    const double e = energy(rng);
    for (auto inc : {Incidence::Left, Incidence::Right}) {
      const auto c = transmit(p, e, inc);
      worst = std::max(worst, std::abs(c.t + c.r - 1.0));
    }
  }
  return {worst < 1e-10, fmt("max |T + R - 1| = %.2e over 500 barriers, both incidences (< 1e-10)", worst)};
}

Outcome single_barrier() {
  const PiecewiseConstantPotential p({0.0, 0.5}, {0.0, 40.0, 0.0});
  double worst = 0;
  for (int k = 1; k <= 199; ++k) {
    const double e = 0.1 + (120.0 - 0.1) * k / 200.0;
    const double ref = test::single_barrier_t(e, 40.0, 0.5);
    worst = std::max(worst, std::abs(transmit(p, e).t - ref) / ref);
  }
  const double limit = 1.0 / (1.0 + 40.0 * 0.25 / 4.0);
  const double at_top = std::abs(solve(p, 40.0).transmission - limit);
  return {worst < 1e-10 && at_top < 1e-6,
          fmt("max rel error %.2e over 199 energies (< 1e-10), |T(V0) - %.6f| = %.2e (< 1e-6)", worst, limit, at_top)};
}

Outcome fig2() {
  const auto t0 = Clock::now();
  const auto cat = find_peaks(build_mbp(uniform_mbp(4, 40.0, 0.5, 2.0)));
  const double elapsed = seconds_since(t0);
  std::vector<double> k;
  for (const auto& pk : cat.sharp)
    if (pk.kappa < std::sqrt(40.0)) k.push_back(pk.kappa);
  bool bands = k.size() == 12;
  double intra = 0;
  double inter = 1e300;
  if (bands) {
    for (std::size_t i = 1; i < k.size(); ++i) {
      const double gap = k[i] - k[i - 1];
      if (i % 3 == 0)
        inter = std::min(inter, gap);
      else
        intra = std::max(intra, gap);
    }
    bands = inter >= 5 * intra;
  }
  const bool marker = std::any_of(k.begin(), k.end(), [](double x) { return x >= 5.207 && x <= 5.227; });
  std::string near = "none";
  for (double x : k)
    if (std::abs(x - 5.217) < 0.05) near = fmt("%.5f", x);
  return {k.size() == 12 && bands && marker && elapsed < 30,
          fmt("%zu sharp peaks (12), min band gap %.3f vs 5 x max intra gap %.3f, peak %s in [5.207, 5.227], %.2f s",
              k.size(), inter, 5 * intra, near.c_str(), elapsed)};
}

Outcome fig3() {
  const std::vector<double> wells{5.0, 3.0, 2.0};
  const auto cat = find_peaks(build_mbp(MbpSpec{40.0, 0.5, wells, 0.0}));
  const int eq24 = peak_count(wells, 40.0);
  std::string diffuse;
  for (const auto& pk : cat.diffuse) diffuse += fmt(" %.3f", pk.kappa);
  return {cat.sharp.size() == 20 && cat.diffuse.size() == 3 && eq24 == 20,
          fmt("%zu sharp (20), %zu diffuse (3) at kappa =%s, floor-sum alpha = %d (20)", cat.sharp.size(),
              cat.diffuse.size(), diffuse.c_str(), eq24)};
}

Outcome alias() {
  // one ordering from each of three distinct mirror classes
  const std::vector<std::vector<double>> quoted{{1, 2, 3, 4}, {2, 1, 4, 3}, {2, 4, 1, 3}};
  std::vector<std::vector<double>> orders = quoted;
  for (const auto& o : quoted) orders.emplace_back(o.rbegin(), o.rend());
  const auto report = alias_audit(MbpSpec{40.0, 0.5, {1, 2, 3, 4}, 0.0}, orders);
  std::string counts;
  std::size_t unmatched = 0;
  for (std::size_t i = 0; i < quoted.size(); ++i) {
    counts += fmt(" %zu", report.results[i].sharp_count);
    unmatched += report.results[i].match.unmatched;
  }
  const bool pass = report.counts_equal && report.max_location_discrepancy <= 1e-2 &&
                    report.reversal_pairs.size() == quoted.size() && report.max_reversal_difference < 1e-12;
  return {pass, fmt("peak counts%s, max matched |dkappa| %.2e (<= 1e-2, %zu peaks outside the gate), "
                    "%zu mirror pairs with max |dT| %.2e (< 1e-12)",
                    counts.c_str(), report.max_location_discrepancy, unmatched, report.reversal_pairs.size(),
                    report.max_reversal_difference)};
}

std::vector<Peak> fig5_row(std::size_t varied, double tau_prime) {
  std::vector<double> wells(5, 1.0);
  wells[varied - 1] = tau_prime;
  return find_peaks(build_mbp(MbpSpec{40.0, 1.0, wells, 0.0})).sharp;
}

Outcome fig5() {
  const double pi = std::numbers::pi;
  std::vector<double> rows;
  for (int k = 0; k <= 40; ++k) rows.push_back(1.0 + 0.1 * k);
  rows.push_back(3.35);
  double worst_track = 0;
  bool same_counts = true;
  std::size_t count_335 = 0;
  for (double tp : rows) {
    std::vector<double> wells(5, 1.0);
    wells[3] = tp;
    const auto cat = find_peaks(build_mbp(MbpSpec{40.0, 1.0, wells, 0.0}));
    for (double target : {pi, 2 * pi}) {
      double best = 1e300;
      for (const auto& pk : cat.peaks) best = std::min(best, std::abs(pk.kappa - target));
      worst_track = std::max(worst_track, best);
    }
    if (tp == 3.35) count_335 = cat.sharp.size();
    same_counts = same_counts && fig5_row(2, tp).size() == cat.sharp.size();
  }
  return {count_335 == 10 && worst_track <= 0.15 && same_counts,
          fmt("row tau'=3.35 has %zu peaks (10), worst distance to pi or 2 pi %.3f (<= 0.15), "
              "per-row counts well 2 vs well 4 %s",
              count_335, worst_track, same_counts ? "equal" : "differ")};
}

Outcome degenerate_continuity() {
  std::mt19937_64 rng(99);
  const double e_max = 80.0;
  double worst = 0;
  int probes = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = test::random_barrier(rng, 40, -50, 80);
    const auto levels = p.levels();
    for (std::size_t j = 1; j + 1 < levels.size(); ++j) {
      const double v = levels[j];
      if (!(v > 0 && v < e_max)) continue;
      const double at = transmit(p, v).t;
      for (double d : {-1e-7, 1e-7}) worst = std::max(worst, std::abs(at - transmit(p, v + d).t));
      ++probes;
    }
  }
  return {worst < 1e-4 && probes > 0, fmt("max |T(V_j) - T(V_j +- 1e-7)| = %.2e over %d levels (< 1e-4)", worst, probes)};
}

Outcome direction_reversal() {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> energy(0.01, 120.0);
  double lr = 0;
  double rev = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = test::random_barrier(rng, 100, -50, 80);
    const double e = energy(rng);
    const double t = transmit(p, e).t;
    lr = std::max(lr, std::abs(t - transmit(p, e, Incidence::Right).t));
    rev = std::max(rev, std::abs(t - transmit(reverse(p), e).t));
  }
  return {lr < 1e-12 && rev < 1e-12, fmt("max |T_L - T_R| = %.2e, max |T(P) - T(rev P)| = %.2e (< 1e-12)", lr, rev)};
}

Outcome performance() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> width(0.01, 0.1);
  std::uniform_real_distribution<double> level(-50, 80);
  const std::size_t n = 100000;
  std::vector<double> xs{0.0};
  std::vector<double> vs{0.0};
  for (std::size_t k = 1; k < n; ++k) {
    xs.push_back(xs.back() + width(rng));
    vs.push_back(level(rng));
  }
  vs.push_back(0.0);
  const PiecewiseConstantPotential p(std::move(xs), std::move(vs));
  const auto t0 = Clock::now();
  const auto c = transmit(p, 30.0);
  const double ms = 1e3 * seconds_since(t0);
  return {ms < 100 && std::isfinite(c.ln_t), fmt("N = 1e5 interfaces solved in %.1f ms (< 100), ln T = %.1f", ms, c.ln_t)};
}

Outcome discretization() {
  std::vector<Sample> samples;
  const std::size_t count = 200001;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -6.0 + 12.0 * static_cast<double>(i) / static_cast<double>(count - 1);
    samples.push_back({x, 40.0 * std::exp(-x * x)});
  }
  const double e = 20.0;
  const double ref = transmit(discretize(samples, 1024), e).t;
  std::vector<double> diffs;
  std::vector<double> ts;
  for (std::size_t steps : {16u, 32u, 64u, 128u, 256u}) {
    const double t = transmit(discretize(samples, steps), e).t;
    ts.push_back(t);
    diffs.push_back(std::abs(t - ref));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < diffs.size(); ++i) decreasing = decreasing && diffs[i] < diffs[i - 1];
  // differences between successive resolutions shrink as well
  for (std::size_t i = 2; i < ts.size(); ++i)
    decreasing = decreasing && std::abs(ts[i] - ts[i - 1]) < std::abs(ts[i - 1] - ts[i - 2]);
  std::string list;
  for (double d : diffs) list += fmt(" %.2e", d);
  return {decreasing && diffs.back() < 1e-4,
          fmt("|T_s - T_1024| for s = 16..256:%s (strictly decreasing, last < 1e-4)", list.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 Pauli-algebra oracle equivalence", pauli_oracle},
      {"2 Exhaustive Pauli table", pauli_table},
      {"3 Conservation T + R = 1", conservation},
      {"4 Single-barrier analytic oracle", single_barrier},
      {"5 Uniform 4BP peak bands", fig2},
      {"6 Asymmetric 4BP peak census", fig3},
      {"7 Alias effect", alias},
      {"8 Single-well scan rows", fig5},
      {"9 Degenerate-energy continuity", degenerate_continuity},
      {"10 Direction and reversal invariance", direction_reversal},
      {"11 Linear-cost fold performance", performance},
      {"12 Discretization convergence", discretization},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
