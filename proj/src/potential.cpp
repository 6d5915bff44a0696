#include "steptunnel/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steptunnel/error.hpp"

namespace steptunnel {

void validate(std::span<const double> breakpoints, std::span<const double> levels) {
  if (breakpoints.empty())
    throw Error(ErrorCode::LengthMismatch, "at least one breakpoint is required");
  if (levels.size() != breakpoints.size() + 1)
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(breakpoints.size() + 1) +
                                               " levels for " + std::to_string(breakpoints.size()) +
                                               " breakpoints, got " + std::to_string(levels.size()));
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]))
      throw Error(ErrorCode::NonIncreasingBreakpoints, "breakpoint " + std::to_string(i) + " is not finite");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw Error(ErrorCode::NonIncreasingBreakpoints,
                  "breakpoint " + std::to_string(i) + " does not exceed breakpoint " + std::to_string(i - 1));
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!std::isfinite(levels[i]))
      throw Error(ErrorCode::LengthMismatch, "level " + std::to_string(i) + " is not finite");
}

PiecewiseConstantPotential::PiecewiseConstantPotential(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
  validate(breakpoints_, levels_);
}

std::size_t PiecewiseConstantPotential::region_of(double x) const {
  // first breakpoint >= x: that breakpoint closes the region containing x
  return static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                  breakpoints_.begin());
}

PiecewiseConstantPotential PiecewiseConstantPotential::translated(double shift) const {
  std::vector<double> xs = breakpoints_;
  for (auto& x : xs) x += shift;
  return {std::move(xs), levels_};
}

double MbpSpec::total_length() const {
  double length = static_cast<double>(barrier_count()) * barrier_width;
  for (double tau : well_widths) length += tau;
  return length;
}

bool MbpSpec::uniform() const {
  return std::all_of(well_widths.begin(), well_widths.end(),
                     [&](double tau) { return tau == well_widths.front(); });
}

void validate(const MbpSpec& spec) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (!(spec.barrier_height > 0) || !std::isfinite(spec.barrier_height)) bad("barrier height must be positive");
  if (!(spec.barrier_width > 0) || !std::isfinite(spec.barrier_width)) bad("barrier width must be positive");
  if (!std::isfinite(spec.origin)) bad("origin must be finite");
  for (std::size_t i = 0; i < spec.well_widths.size(); ++i)
    if (!(spec.well_widths[i] > 0) || !std::isfinite(spec.well_widths[i]))
      bad("well width " + std::to_string(i) + " must be positive");
}

MbpSpec uniform_mbp(std::size_t barrier_count, double v0, double delta, double tau, double origin) {
  if (barrier_count == 0) throw Error(ErrorCode::InvalidSpec, "barrier count must be at least 1");
  return {v0, delta, std::vector<double>(barrier_count - 1, tau), origin};
}

PiecewiseConstantPotential build_mbp(const MbpSpec& spec) {
  validate(spec);
  const std::size_t m = spec.barrier_count();
  const double delta = spec.barrier_width;
  const double theta = spec.origin;

  std::vector<double> xs(2 * m);
  if (spec.uniform() && m > 1) {
    // closed form, 1-based j: odd j opens a barrier, even j closes it
    const double tau = spec.well_widths.front();
    for (std::size_t i = 0; i < 2 * m; ++i) {
      const double j = static_cast<double>(i + 1);
      xs[i] = (i % 2 == 0) ? (j - 1) / 2 * (delta + tau) + theta : j / 2 * delta + (j / 2 - 1) * tau + theta;
    }
  } else {
    double start = theta;
    for (std::size_t k = 0; k < m; ++k) {
      xs[2 * k] = start;
      xs[2 * k + 1] = start + delta;
      if (k + 1 < m) start = xs[2 * k + 1] + spec.well_widths[k];
    }
  }

  std::vector<double> vs(2 * m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) vs[2 * k + 1] = spec.barrier_height;
  return simplified(PiecewiseConstantPotential(std::move(xs), std::move(vs)));
}

PiecewiseConstantPotential reverse(const PiecewiseConstantPotential& potential) {
  const auto xs = potential.breakpoints();
  const auto vs = potential.levels();
  const double lo = xs.front();
  const double hi = xs.back();
  std::vector<double> rx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) rx[i] = lo + (hi - xs[xs.size() - 1 - i]);
  std::vector<double> rv(vs.rbegin(), vs.rend());
  return {std::move(rx), std::move(rv)};
}

PiecewiseConstantPotential simplified(const PiecewiseConstantPotential& potential) {
  const auto xs = potential.breakpoints();
  const auto vs = potential.levels();
  std::vector<double> out_x;
  std::vector<double> out_v{vs.front()};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double next = vs[i + 1];
    if (!out_x.empty() && xs[i] == out_x.back()) {
      // zero-width interval: the new level replaces the collapsed one
      out_v.back() = next;
      if (out_v.size() >= 2 && out_v[out_v.size() - 2] == next) {
        out_v.pop_back();
        out_x.pop_back();
      }
      continue;
    }
    if (next == out_v.back()) continue;
    out_x.push_back(xs[i]);
    out_v.push_back(next);
  }
  if (out_x.empty()) {
    // a flat line still needs one (fictitious) interface
    out_x.push_back(xs.front());
    out_v.push_back(vs.back());
  }
  return {std::move(out_x), std::move(out_v)};
}

double interpolate(std::span<const Sample> samples, double x) {
  if (samples.empty() || x < samples.front().x || x > samples.back().x) return 0.0;
  auto it = std::lower_bound(samples.begin(), samples.end(), x,
                             [](const Sample& s, double value) { return s.x < value; });
  if (it == samples.begin()) return it->v;
  const Sample& right = *it;
  const Sample& left = *(it - 1);
  if (right.x == left.x) return right.v;
  const double t = (x - left.x) / (right.x - left.x);
  return left.v + t * (right.v - left.v);
}

PiecewiseConstantPotential discretize(std::span<const Sample> samples, std::size_t steps) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "no samples to discretize");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].x > samples[i - 1].x))
      throw Error(ErrorCode::UnsortedSamples, "sample " + std::to_string(i) + " is not to the right of sample " +
                                                  std::to_string(i - 1));
  if (steps == 0) throw Error(ErrorCode::InvalidSpec, "steps must be at least 1");
  const double lo = samples.front().x;
  const double hi = samples.back().x;
  if (!(hi > lo)) throw Error(ErrorCode::EmptySamples, "samples span a zero-length interval");

  const double h = (hi - lo) / static_cast<double>(steps);
  std::vector<double> xs(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) xs[i] = lo + h * static_cast<double>(i);
  xs.back() = hi;

  std::vector<double> vs(steps + 2, 0.0);
  for (std::size_t i = 0; i < steps; ++i) vs[i + 1] = interpolate(samples, 0.5 * (xs[i] + xs[i + 1]));
  return {std::move(xs), std::move(vs)};
}

}  // namespace steptunnel
