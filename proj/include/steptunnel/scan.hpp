#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steptunnel/potential.hpp"

namespace steptunnel {

/// count points from lo to hi inclusive, evenly spaced.
struct GridAxis {
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;

  double at(std::size_t i) const;
  std::vector<double> values() const;
};

/// Throws InvalidRange unless 0 < lo < hi (when require_positive) and count >= min_count.
void validate(const GridAxis& axis, std::size_t min_count = 2, bool require_positive = true);

/// Parses "lo:hi:count".
GridAxis parse_axis(const std::string& text);

struct SpectrumRow {
  double kappa = 0;
  double energy = 0;  // kappa^2
  double t = 0;
  double ln_t = 0;
  double r = 0;

  bool operator==(const SpectrumRow&) const = default;
};

/// One independent solve per grid point at E = kappa^2.
std::vector<SpectrumRow> spectrum(const PiecewiseConstantPotential& potential, const GridAxis& kappa_axis,
                                  unsigned threads = 1);

enum class ParamKind { UniformTau, SingleWellTauPrime };

/// Row-major ln T: one row per parameter value, one column per kappa.
struct GridScan {
  GridAxis kappa_axis;
  GridAxis param_axis;
  ParamKind kind = ParamKind::UniformTau;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * kappa_axis.count + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * kappa_axis.count, kappa_axis.count);
  }
};

/// ln T over the kappa-tau plane for uniform m-barrier trains.
GridScan scan_uniform_tau(std::size_t barrier_count, double v0, double delta, const GridAxis& tau_axis,
                          const GridAxis& kappa_axis, unsigned threads = 1);

/// All wells at base_tau except well `varied_index` (1-based), which takes
/// each value of the tau' axis.
GridScan scan_single_well(std::size_t barrier_count, double v0, double delta, double base_tau,
                          std::size_t varied_index, const GridAxis& tau_prime_axis, const GridAxis& kappa_axis,
                          unsigned threads = 1);

struct Polyline {
  int n = 0;
  std::vector<std::pair<double, double>> points;  // (kappa, tau)
};

/// Curves kappa tau = n pi for n = 1..n_max, sampled on the kappa axis and
/// clipped to the tau axis range.
std::vector<Polyline> overlay_hyperbolas(const GridAxis& kappa_axis, const GridAxis& tau_axis, int n_max);

/// Vertical lines kappa = n pi / tau for a fixed well, clipped to the kappa axis.
std::vector<Polyline> overlay_verticals(const GridAxis& kappa_axis, const GridAxis& tau_axis, double tau);

// CSV and raster output. Numbers carry 17 significant digits.
std::string spectrum_csv(std::span<const SpectrumRow> rows);
std::vector<SpectrumRow> parse_spectrum_csv(const std::string& text);
std::string grid_csv(const GridScan& scan);
std::string polylines_csv(std::span<const Polyline> lines);

/// ln T mapped linearly from [min ln T, 0] onto [0, 255]; row 0 is the
/// lowest parameter value.
std::vector<std::uint8_t> raster_pixels(const GridScan& scan);
std::string raster_pgm(const GridScan& scan);
std::string raster_sidecar(const GridScan& scan);

enum class EmitFormat { Csv, Raster };

/// Writes the file; for rasters also writes `<path>.txt` describing the axes
/// and the gray mapping. Throws IoError (or EmptyData for empty input).
void emit(std::span<const SpectrumRow> rows, const std::filesystem::path& path);
void emit(const GridScan& scan, EmitFormat format, const std::filesystem::path& path);
void emit_text(const std::string& text, const std::filesystem::path& path);

}  // namespace steptunnel
