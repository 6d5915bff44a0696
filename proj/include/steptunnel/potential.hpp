#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace steptunnel {

/// V(x) = levels[j] on the j-th interval between consecutive breakpoints.
///
/// N breakpoints split the real line into N + 1 regions; levels[0] and
/// levels[N] are the semi-infinite leads. Energies and potentials are in
/// natural units with 2m/hbar^2 = 1, so the lead wave number is sqrt(E - V).
class PiecewiseConstantPotential {
 public:
  PiecewiseConstantPotential() = default;

  /// Throws Error(NonIncreasingBreakpoints | LengthMismatch) on invalid input.
  PiecewiseConstantPotential(std::vector<double> breakpoints, std::vector<double> levels);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> levels() const { return levels_; }

  std::size_t interface_count() const { return breakpoints_.size(); }
  std::size_t region_count() const { return levels_.size(); }

  double left_lead() const { return levels_.front(); }
  double right_lead() const { return levels_.back(); }

  /// Region index (0-based) containing x; a breakpoint belongs to the region on its left.
  std::size_t region_of(double x) const;
  double operator()(double x) const { return levels_[region_of(x)]; }

  /// x_N - x_1.
  double span_length() const { return breakpoints_.back() - breakpoints_.front(); }

  PiecewiseConstantPotential translated(double shift) const;

  bool operator==(const PiecewiseConstantPotential&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

/// Throws on the first violated invariant.
void validate(std::span<const double> breakpoints, std::span<const double> levels);

/// Train of equal rectangular barriers separated by wells of the given widths.
struct MbpSpec {
  double barrier_height = 0;   // V_0
  double barrier_width = 0;    // delta
  std::vector<double> well_widths;  // tau_1 .. tau_{m-1}
  double origin = 0;           // Theta

  std::size_t barrier_count() const { return well_widths.size() + 1; }
  double total_length() const;
  bool uniform() const;
};

void validate(const MbpSpec& spec);

/// Uniform convenience: m barriers, every well of width tau.
MbpSpec uniform_mbp(std::size_t barrier_count, double v0, double delta, double tau, double origin = 0);

PiecewiseConstantPotential build_mbp(const MbpSpec& spec);

/// Mirror image about the midpoint of [x_1, x_N].
PiecewiseConstantPotential reverse(const PiecewiseConstantPotential& potential);

/// Collapse zero-width intervals and merge equal adjacent levels.
PiecewiseConstantPotential simplified(const PiecewiseConstantPotential& potential);

struct Sample {
  double x;
  double v;
};

/// Staircase with `steps` equal-width intervals over [min x, max x]. Each
/// level is the linearly interpolated sample value at the interval midpoint;
/// the two leads are at 0.
PiecewiseConstantPotential discretize(std::span<const Sample> samples, std::size_t steps);

/// Linear interpolation of sorted samples; 0 outside the sampled range.
double interpolate(std::span<const Sample> samples, double x);

}  // namespace steptunnel
