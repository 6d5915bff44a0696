#include "steptunnel/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "steptunnel/error.hpp"
#include "steptunnel/scattering.hpp"

namespace steptunnel {

namespace {

constexpr double kInvGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

using Objective = std::function<double(double)>;

struct Extremum {
  double x;
  double f;
};

// Golden-section search for a maximum of f on [a, b]. The bracket is shrunk
// to tol / 4 so that the returned point beats f(x +- tol).
Extremum golden_max(const Objective& f, double a, double b, double tol) {
  tol /= 4;
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

Extremum golden_min(const Objective& f, double a, double b, double tol) {
  auto r = golden_max([&](double x) { return -f(x); }, a, b, tol);
  return {r.x, -r.f};
}

// Walk uphill from `seed` with a doubling step until the value drops, then
// hand the bracket to golden_max. Returns nothing if the climb runs into the
// range boundary.
std::optional<Extremum> climb(const Objective& f, double seed, double step, double lo, double hi, double tol) {
  if (seed <= lo || seed >= hi) return std::nullopt;
  double x0 = seed;
  double f0 = f(x0);
  const double right = std::min(hi, x0 + step);
  const double left = std::max(lo, x0 - step);
  const double fr = f(right);
  const double fl = f(left);
  if (f0 >= fr && f0 >= fl) return golden_max(f, left, right, tol);

  const double dir = fr > fl ? 1.0 : -1.0;
  double prev = x0;
  double x1 = dir > 0 ? right : left;
  double f1 = dir > 0 ? fr : fl;
  double h = step;
  for (int iter = 0; iter < 200; ++iter) {
    if (x1 <= lo || x1 >= hi) return std::nullopt;
    h *= 1.6;
    const double x2 = std::clamp(x1 + dir * h, lo, hi);
    const double f2 = f(x2);
    if (f2 < f1) {
      const double a = std::min(prev, x2);
      const double b = std::max(prev, x2);
      return golden_max(f, a, b, tol);
    }
    prev = x1;
    x1 = x2;
    f1 = f2;
  }
  return std::nullopt;
}

double lead_level(const PiecewiseConstantPotential& p) { return p.left_lead(); }

}  // namespace

int band_count(double tau, double v0) {
  if (!(tau > 0) || !(v0 > 0)) return 0;
  return static_cast<int>(std::floor(tau * std::sqrt(v0) / std::numbers::pi));
}

std::vector<double> distinct_widths(std::span<const double> well_widths) {
  std::vector<double> sorted(well_widths.begin(), well_widths.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (double w : sorted)
    if (out.empty() || std::abs(w - out.back()) > 1e-12 * std::max(1.0, std::abs(w))) out.push_back(w);
  return out;
}

int peak_count(std::span<const double> well_widths, double v0) {
  int alpha = 0;
  for (double w : distinct_widths(well_widths)) alpha += band_count(w, v0);
  return alpha;
}

std::vector<ResonanceEstimate> estimates(std::span<const double> well_widths, double /*v0*/, double kappa_max) {
  std::vector<ResonanceEstimate> out;
  for (double tau : distinct_widths(well_widths)) {
    for (int n = 1;; ++n) {
      const double kappa = n * std::numbers::pi / tau;
      if (kappa > kappa_max) break;
      out.push_back({tau, n, kappa});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.kappa_estimate < b.kappa_estimate; });
  return out;
}

std::vector<double> well_widths(const PiecewiseConstantPotential& potential) {
  const auto xs = potential.breakpoints();
  const auto vs = potential.levels();
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < vs.size(); ++j)
    if (vs[j] < vs[j - 1] && vs[j] < vs[j + 1]) out.push_back(xs[j] - xs[j - 1]);
  return out;
}

ResonanceCatalog find_peaks(const PiecewiseConstantPotential& potential, const PeakSearchOptions& options) {
  const double lead = lead_level(potential);
  const auto levels = potential.levels();
  const double v0 = options.barrier_top.value_or(*std::max_element(levels.begin(), levels.end()) - lead);
  const double sqrt_v0 = std::sqrt(std::max(v0, 0.0));
  const double lo = options.kappa_lo;
  const double hi = options.kappa_hi > 0 ? options.kappa_hi : 1.2 * sqrt_v0;
  if (!(lo > 0) || !(hi > lo) || options.grid_points < 16 || !(options.refine_tolerance > 0))
    throw Error(ErrorCode::InvalidRange, "peak search needs 0 < lo < hi and at least 16 grid points");
  const double tol = options.refine_tolerance;

  const Objective ln_t = [&](double kappa) { return transmit(potential, kappa * kappa).ln_t; };

  const std::size_t n = options.grid_points;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> grid(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  detail::parallel_for(n, options.threads, [&](std::size_t i) { values[i] = ln_t(grid[i]); });

  // candidates: grid maxima plus climbs from the square-well estimates
  std::vector<Extremum> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (values[i] > values[i - 1] && values[i] >= values[i + 1])
      candidates.push_back(golden_max(ln_t, grid[i - 1], grid[i + 1], tol));

  ResonanceCatalog catalog;
  catalog.barrier_top = v0;
  const auto wells = well_widths(potential);
  catalog.estimates = estimates(wells, v0, hi);
  for (const auto& e : catalog.estimates)
    if (auto peak = climb(ln_t, e.kappa_estimate, step / 4, lo, hi, tol)) candidates.push_back(*peak);

  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  std::vector<Extremum> peaks;
  for (const auto& c : candidates) {
    if (!peaks.empty() && c.x - peaks.back().x < 2 * tol) {
      if (c.f > peaks.back().f) peaks.back() = c;
      continue;
    }
    peaks.push_back(c);
  }

  // lowest ln T in each gap between consecutive peaks (and the two ends)
  auto segment_min = [&](double a, double b) {
    Extremum best{a, ln_t(a)};
    const auto first = std::upper_bound(grid.begin(), grid.end(), a);
    const auto last = std::lower_bound(grid.begin(), grid.end(), b);
    std::size_t arg = n;
    for (auto it = first; it < last; ++it) {
      const std::size_t i = static_cast<std::size_t>(it - grid.begin());
      if (values[i] < best.f) {
        best = {grid[i], values[i]};
        arg = i;
      }
    }
    const double fb = ln_t(b);
    if (fb < best.f) best = {b, fb};
    double ga = a;
    double gb = b;
    if (arg < n) {
      ga = std::max(a, arg > 0 ? grid[arg - 1] : a);
      gb = std::min(b, arg + 1 < n ? grid[arg + 1] : b);
    }
    if (gb - ga > tol) {
      const auto refined = golden_min(ln_t, ga, gb, tol);
      if (refined.f < best.f) best = refined;
    }
    return best;
  };

  std::vector<Extremum> gaps;
  gaps.reserve(peaks.size() + 1);
  for (std::size_t a = 0; a <= peaks.size(); ++a) {
    const double left = a == 0 ? lo : peaks[a - 1].x;
    const double right = a == peaks.size() ? hi : peaks[a].x;
    gaps.push_back(segment_min(left, right));
  }

  const double band_lo = options.diffuse_band_lo * sqrt_v0;
  const double band_hi = options.diffuse_band_hi * sqrt_v0;
  auto floor_for = [&](double kappa) {
    return (kappa >= band_lo && kappa <= band_hi) ? std::min(options.diffuse_floor, options.sharp_floor)
                                                  : options.sharp_floor;
  };
  auto prominence = [&](std::size_t a) { return peaks[a].f - std::min(gaps[a].f, gaps[a + 1].f); };

  // drop the weakest sub-floor peak and merge its flanks until all pass
  while (!peaks.empty()) {
    std::size_t worst = peaks.size();
    double worst_margin = 0;
    for (std::size_t a = 0; a < peaks.size(); ++a) {
      const double margin = prominence(a) - floor_for(peaks[a].x);
      if (margin < 0 && (worst == peaks.size() || margin < worst_margin)) {
        worst_margin = margin;
        worst = a;
      }
    }
    if (worst == peaks.size()) break;
    if (gaps[worst + 1].f < gaps[worst].f) gaps[worst] = gaps[worst + 1];
    gaps.erase(gaps.begin() + static_cast<std::ptrdiff_t>(worst) + 1);
    peaks.erase(peaks.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  for (std::size_t a = 0; a < peaks.size(); ++a) {
    Peak peak;
    peak.kappa = peaks[a].x;
    peak.ln_t = peaks[a].f;
    peak.prominence = prominence(a);
    const double half = peak.ln_t - peak.prominence / 2;
    auto crossing = [&](double outer) {
      if (ln_t(outer) >= half) return outer;
      double inside = peak.kappa;
      for (int it = 0; it < 80 && std::abs(inside - outer) > tol * 1e-3; ++it) {
        const double mid = 0.5 * (inside + outer);
        (ln_t(mid) >= half ? inside : outer) = mid;
      }
      return 0.5 * (inside + outer);
    };
    peak.width = crossing(gaps[a + 1].x) - crossing(gaps[a].x);
    if (!(peak.width > 0)) peak.width = tol;
    catalog.peaks.push_back(peak);

    if (peak.kappa < sqrt_v0 && peak.prominence >= options.sharp_floor)
      catalog.sharp.push_back(peak);
    else if (peak.kappa >= band_lo && peak.kappa <= band_hi && peak.prominence >= options.diffuse_floor)
      catalog.diffuse.push_back(peak);
  }

  int beta = 0;
  for (double w : distinct_widths(wells)) beta = std::max(beta, band_count(w, v0));
  catalog.band_count_beta = beta;
  catalog.peak_count_alpha = peak_count(wells, v0);
  return catalog;
}

PeakMatch match_peaks(std::span<const double> reference, std::span<const double> candidate, double gate) {
  struct Pair {
    double distance;
    std::size_t r;
    std::size_t c;
  };
  std::vector<Pair> pairs;
  for (std::size_t r = 0; r < reference.size(); ++r)
    for (std::size_t c = 0; c < candidate.size(); ++c) {
      const double d = std::abs(reference[r] - candidate[c]);
      if (d <= gate) pairs.push_back({d, r, c});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.distance < b.distance || (a.distance == b.distance && (a.r < b.r || (a.r == b.r && a.c < b.c)));
  });
  std::vector<bool> used_r(reference.size(), false);
  std::vector<bool> used_c(candidate.size(), false);
  PeakMatch out;
  for (const auto& p : pairs) {
    if (used_r[p.r] || used_c[p.c]) continue;
    used_r[p.r] = used_c[p.c] = true;
    ++out.matched;
    out.max_discrepancy = std::max(out.max_discrepancy, p.distance);
  }
  out.unmatched = (reference.size() - out.matched) + (candidate.size() - out.matched);
  return out;
}

std::vector<std::vector<double>> all_orderings(std::vector<double> widths) {
  std::sort(widths.begin(), widths.end());
  std::vector<std::vector<double>> out;
  do {
    out.push_back(widths);
  } while (std::next_permutation(widths.begin(), widths.end()));
  return out;
}

AliasReport alias_audit(const MbpSpec& spec, const std::vector<std::vector<double>>& orderings,
                        const AliasOptions& options) {
  validate(spec);
  auto reference = spec.well_widths;
  std::sort(reference.begin(), reference.end());

  AliasReport report;
  std::vector<std::vector<double>> orders;
  for (std::size_t i = 0; i < orderings.size(); ++i) {
    auto sorted = orderings[i];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != reference)
      throw Error(ErrorCode::BadPermutation, "ordering " + std::to_string(i) + " is not a rearrangement of the wells");
    if (std::find(orders.begin(), orders.end(), orderings[i]) != orders.end()) {
      ++report.duplicates_removed;
      continue;
    }
    orders.push_back(orderings[i]);
  }
  if (orders.empty()) throw Error(ErrorCode::BadPermutation, "no orderings given");

  const double v0 = spec.barrier_height;
  const double sqrt_v0 = std::sqrt(v0);
  PeakSearchOptions search = options.search;
  search.barrier_top = v0;

  report.results.resize(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    MbpSpec s = spec;
    s.well_widths = orders[i];
    const auto catalog = find_peaks(build_mbp(s), search);
    auto& r = report.results[i];
    r.order = orders[i];
    r.sharp_count = catalog.sharp.size();
    for (const auto& p : catalog.sharp)
      if (p.kappa < sqrt_v0) r.sharp_locations.push_back(p.kappa);
  }

  for (auto& r : report.results) {
    r.match = match_peaks(report.results.front().sharp_locations, r.sharp_locations, options.match_gate);
    report.counts_equal = report.counts_equal && r.sharp_count == report.results.front().sharp_count;
    report.max_location_discrepancy = std::max(report.max_location_discrepancy, r.match.max_discrepancy);
    report.total_unmatched += r.match.unmatched;
  }

  // mirror-image orderings describe the same barrier traversed backwards
  const double lo = search.kappa_lo;
  const double hi = search.kappa_hi > 0 ? search.kappa_hi : 1.2 * sqrt_v0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    std::vector<double> mirrored(orders[i].rbegin(), orders[i].rend());
    if (mirrored == orders[i]) continue;
    for (std::size_t k = i + 1; k < orders.size(); ++k) {
      if (orders[k] != mirrored) continue;
      MbpSpec a = spec;
      a.well_widths = orders[i];
      MbpSpec b = spec;
      b.well_widths = orders[k];
      const auto pa = build_mbp(a);
      const auto pb = build_mbp(b);
      ReversalPair pair{i, k, 0.0};
      const std::size_t count = std::max<std::size_t>(2, options.curve_points);
      for (std::size_t g = 0; g < count; ++g) {
        const double kappa = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(count - 1);
        const double e = kappa * kappa;
        pair.max_t_difference = std::max(pair.max_t_difference, std::abs(transmit(pa, e).t - transmit(pb, e).t));
      }
      report.max_reversal_difference = std::max(report.max_reversal_difference, pair.max_t_difference);
      report.reversal_pairs.push_back(pair);
    }
  }
  return report;
}

}  // namespace steptunnel
