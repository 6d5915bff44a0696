#include "steptunnel/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "steptunnel/error.hpp"
#include "steptunnel/scattering.hpp"

namespace steptunnel {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> ln_t_row(const PiecewiseConstantPotential& potential, const GridAxis& kappa_axis) {
  std::vector<double> row(kappa_axis.count);
  for (std::size_t i = 0; i < kappa_axis.count; ++i) {
    const double kappa = kappa_axis.at(i);
    row[i] = transmit(potential, kappa * kappa).ln_t;
  }
  return row;
}

template <typename BuildRow>
GridScan fill_scan(const GridAxis& param_axis, const GridAxis& kappa_axis, ParamKind kind, unsigned threads,
                   BuildRow&& build) {
  GridScan scan{kappa_axis, param_axis, kind, std::vector<double>(param_axis.count * kappa_axis.count)};
  // one task per (row, column) cell; rows share nothing
  std::vector<PiecewiseConstantPotential> barriers(param_axis.count);
  for (std::size_t r = 0; r < param_axis.count; ++r) barriers[r] = build(param_axis.at(r));
  detail::parallel_for(scan.values.size(), threads, [&](std::size_t cell) {
    const std::size_t r = cell / kappa_axis.count;
    const std::size_t c = cell % kappa_axis.count;
    const double kappa = kappa_axis.at(c);
    scan.values[cell] = transmit(barriers[r], kappa * kappa).ln_t;
  });
  return scan;
}

}  // namespace

double GridAxis::at(std::size_t i) const {
  if (count <= 1) return lo;
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

void validate(const GridAxis& axis, std::size_t min_count, bool require_positive) {
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || !(axis.hi > axis.lo))
    throw Error(ErrorCode::InvalidRange, "axis needs lo < hi, got " + fmt17(axis.lo) + ":" + fmt17(axis.hi));
  if (require_positive && !(axis.lo > 0))
    throw Error(ErrorCode::InvalidRange, "axis needs lo > 0, got " + fmt17(axis.lo));
  if (axis.count < min_count)
    throw Error(ErrorCode::InvalidRange, "axis needs at least " + std::to_string(min_count) + " points");
}

GridAxis parse_axis(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw Error(ErrorCode::InvalidRange, "grid '" + text + "' is not of the form lo:hi:count");
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v))
      throw Error(ErrorCode::InvalidRange, "grid '" + text + "' has a non-numeric field '" + s + "'");
    return v;
  };
  GridAxis axis;
  axis.lo = number(text.substr(0, first));
  axis.hi = number(text.substr(first + 1, second - first - 1));
  const double count = number(text.substr(second + 1));
  if (count < 1 || count != std::floor(count))
    throw Error(ErrorCode::InvalidRange, "grid '" + text + "' needs a positive integer count");
  axis.count = static_cast<std::size_t>(count);
  return axis;
}

std::vector<SpectrumRow> spectrum(const PiecewiseConstantPotential& potential, const GridAxis& kappa_axis,
                                  unsigned threads) {
  validate(kappa_axis);
  std::vector<SpectrumRow> rows(kappa_axis.count);
  detail::parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double kappa = kappa_axis.at(i);
    const double energy = kappa * kappa;
    try {
      const auto tr = transmit(potential, energy);
      rows[i] = {kappa, energy, tr.t, tr.ln_t, tr.r};
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (at kappa = " + fmt17(kappa) + ")");
    }
  });
  return rows;
}

GridScan scan_uniform_tau(std::size_t barrier_count, double v0, double delta, const GridAxis& tau_axis,
                          const GridAxis& kappa_axis, unsigned threads) {
  if (barrier_count < 2) throw Error(ErrorCode::InvalidSpec, "a tau scan needs at least two barriers");
  validate(kappa_axis);
  validate(tau_axis, 1);
  return fill_scan(tau_axis, kappa_axis, ParamKind::UniformTau, threads,
                   [&](double tau) { return build_mbp(uniform_mbp(barrier_count, v0, delta, tau)); });
}

GridScan scan_single_well(std::size_t barrier_count, double v0, double delta, double base_tau,
                          std::size_t varied_index, const GridAxis& tau_prime_axis, const GridAxis& kappa_axis,
                          unsigned threads) {
  if (barrier_count < 2 || varied_index < 1 || varied_index > barrier_count - 1)
    throw Error(ErrorCode::InvalidSpec, "varied well index must lie in 1..m-1");
  validate(kappa_axis);
  validate(tau_prime_axis, 1);
  return fill_scan(tau_prime_axis, kappa_axis, ParamKind::SingleWellTauPrime, threads, [&](double tau_prime) {
    MbpSpec spec = uniform_mbp(barrier_count, v0, delta, base_tau);
    spec.well_widths[varied_index - 1] = tau_prime;
    return build_mbp(spec);
  });
}

std::vector<Polyline> overlay_hyperbolas(const GridAxis& kappa_axis, const GridAxis& tau_axis, int n_max) {
  std::vector<Polyline> out;
  for (int n = 1; n <= n_max; ++n) {
    Polyline line{n, {}};
    for (double kappa : kappa_axis.values()) {
      if (!(kappa > 0)) continue;
      const double tau = n * std::numbers::pi / kappa;
      if (tau >= tau_axis.lo && tau <= tau_axis.hi) line.points.emplace_back(kappa, tau);
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<Polyline> overlay_verticals(const GridAxis& kappa_axis, const GridAxis& tau_axis, double tau) {
  std::vector<Polyline> out;
  for (int n = 1;; ++n) {
    const double kappa = n * std::numbers::pi / tau;
    if (kappa > kappa_axis.hi) break;
    if (kappa < kappa_axis.lo) continue;
    out.push_back({n, {{kappa, tau_axis.lo}, {kappa, tau_axis.hi}}});
  }
  return out;
}

std::string spectrum_csv(std::span<const SpectrumRow> rows) {
  std::string out = "kappa,energy,T,lnT,R\n";
  for (const auto& r : rows)
    out += fmt17(r.kappa) + ',' + fmt17(r.energy) + ',' + fmt17(r.t) + ',' + fmt17(r.ln_t) + ',' + fmt17(r.r) + '\n';
  return out;
}

std::vector<SpectrumRow> parse_spectrum_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "kappa,energy,T,lnT,R")
    throw Error(ErrorCode::ParseError, "spectrum CSV must start with header kappa,energy,T,lnT,R");
  std::vector<SpectrumRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[5];
    const char* p = line.c_str();
    for (int k = 0; k < 5; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p || (k < 4 && *end != ',') || (k == 4 && *end != '\0'))
        throw Error(ErrorCode::ParseError, "malformed spectrum CSV line " + std::to_string(lineno));
      p = end + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

std::string grid_csv(const GridScan& scan) {
  std::string out = "kappa,param,lnT\n";
  for (std::size_t r = 0; r < scan.param_axis.count; ++r) {
    const std::string param = fmt17(scan.param_axis.at(r));
    for (std::size_t c = 0; c < scan.kappa_axis.count; ++c)
      out += fmt17(scan.kappa_axis.at(c)) + ',' + param + ',' + fmt17(scan.at(r, c)) + '\n';
  }
  return out;
}

std::string polylines_csv(std::span<const Polyline> lines) {
  std::string out = "n,kappa,tau\n";
  for (const auto& line : lines)
    for (const auto& [kappa, tau] : line.points)
      out += std::to_string(line.n) + ',' + fmt17(kappa) + ',' + fmt17(tau) + '\n';
  return out;
}

std::vector<std::uint8_t> raster_pixels(const GridScan& scan) {
  if (scan.values.empty()) throw Error(ErrorCode::EmptyData, "grid has no values");
  const double lowest = std::min(0.0, *std::min_element(scan.values.begin(), scan.values.end()));
  std::vector<std::uint8_t> pixels(scan.values.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    double level = lowest < 0 ? 255.0 * (scan.values[i] - lowest) / (0.0 - lowest) : 255.0;
    level = std::clamp(level, 0.0, 255.0);
    pixels[i] = static_cast<std::uint8_t>(std::lround(level));
  }
  return pixels;
}

std::string raster_pgm(const GridScan& scan) {
  const auto pixels = raster_pixels(scan);
  std::string out = "P5\n" + std::to_string(scan.kappa_axis.count) + ' ' + std::to_string(scan.param_axis.count) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

std::string raster_sidecar(const GridScan& scan) {
  if (scan.values.empty()) throw Error(ErrorCode::EmptyData, "grid has no values");
  const double lowest = std::min(0.0, *std::min_element(scan.values.begin(), scan.values.end()));
  std::ostringstream out;
  out << "columns: kappa " << fmt17(scan.kappa_axis.lo) << ':' << fmt17(scan.kappa_axis.hi) << ':'
      << scan.kappa_axis.count << '\n';
  out << "rows: " << (scan.kind == ParamKind::UniformTau ? "tau" : "tau_prime") << ' ' << fmt17(scan.param_axis.lo)
      << ':' << fmt17(scan.param_axis.hi) << ':' << scan.param_axis.count << '\n';
  out << "row 0: lowest parameter value\n";
  out << "gray = round(255 * (lnT - " << fmt17(lowest) << ") / (0 - " << fmt17(lowest) << "))\n";
  out << "lnT_min: " << fmt17(lowest) << '\n';
  out << "lnT_max: 0\n";
  return out.str();
}

void emit_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

void emit(std::span<const SpectrumRow> rows, const std::filesystem::path& path) {
  if (rows.empty()) throw Error(ErrorCode::EmptyData, "spectrum has no rows");
  emit_text(spectrum_csv(rows), path);
}

void emit(const GridScan& scan, EmitFormat format, const std::filesystem::path& path) {
  if (scan.values.empty()) throw Error(ErrorCode::EmptyData, "grid has no values");
  if (format == EmitFormat::Csv) {
    emit_text(grid_csv(scan), path);
    return;
  }
  emit_text(raster_pgm(scan), path);
  emit_text(raster_sidecar(scan), path.string() + ".txt");
}

}  // namespace steptunnel
