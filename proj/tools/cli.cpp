#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "steptunnel/error.hpp"
#include "steptunnel/potential.hpp"
#include "steptunnel/potential_io.hpp"
#include "steptunnel/resonance.hpp"
#include "steptunnel/scan.hpp"
#include "steptunnel/scattering.hpp"

namespace steptunnel::cli {

namespace {

constexpr const char* kUnitsNote =
    "All physics quantities use natural units with 2m/hbar^2 = 1: energies and potentials share one unit, "
    "kappa = sqrt(E) in the leads, lengths are in the reciprocal unit.";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v))
      throw ConfigError(flag + ": '" + item + "' is not a finite number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

GridAxis axis_from(const std::string& text, const std::string& flag) {
  try {
    auto axis = parse_axis(text);
    validate(axis);
    return axis;
  } catch (const Error& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

// Potential source flags shared by every command.
struct SourceFlags {
  std::string potential_file;
  std::string mbp;
  std::string wells;
  double theta = 0;
  CLI::Option* file_opt = nullptr;
  CLI::Option* mbp_opt = nullptr;
  CLI::Option* wells_opt = nullptr;
  CLI::Option* theta_opt = nullptr;

  void attach(CLI::App* app) {
    file_opt = app->add_option("--potential", potential_file, "Potential definition JSON file");
    mbp_opt = app->add_option("--mbp", mbp, "Inline multi-barrier train: m,V0,delta");
    wells_opt = app->add_option("--wells", wells, "Well widths tau_1,...,tau_{m-1}");
    theta_opt = app->add_option("--theta", theta, "Start of the barrier train");
    file_opt->excludes(mbp_opt);
  }

  bool given() const { return file_opt->count() + mbp_opt->count() > 0; }

  // fill stands in for --wells when the caller overrides the widths anyway
  std::optional<MbpSpec> mbp_spec(std::optional<double> fill = std::nullopt) const {
    if (mbp_opt->count() == 0) {
      if (file_opt->count() == 0) return std::nullopt;
      const auto source = load_potential(potential_file);
      if (const auto* spec = std::get_if<MbpSpec>(&source)) return *spec;
      return std::nullopt;
    }
    const auto fields = parse_list(mbp, "--mbp");
    if (fields.size() != 3) throw ConfigError("--mbp expects m,V0,delta");
    if (fields[0] < 1 || fields[0] != std::floor(fields[0])) throw ConfigError("--mbp: m must be a positive integer");
    const auto m = static_cast<std::size_t>(fields[0]);
    MbpSpec spec;
    spec.barrier_height = fields[1];
    spec.barrier_width = fields[2];
    spec.origin = theta;
    if (wells_opt->count() > 0)
      spec.well_widths = parse_list(wells, "--wells");
    else if (fill)
      spec.well_widths.assign(m - 1, *fill);
    if (spec.well_widths.size() != m - 1)
      throw ConfigError("--wells: expected " + std::to_string(m - 1) + " widths for m = " + std::to_string(m));
    try {
      validate(spec);
    } catch (const Error& e) {
      throw ConfigError(std::string("--mbp: ") + e.what());
    }
    return spec;
  }

  PiecewiseConstantPotential potential() const {
    if (!given()) throw ConfigError("a potential is required: pass --potential FILE or --mbp m,V0,delta");
    if (file_opt->count() > 0) return resolve(load_potential(potential_file));
    return build_mbp(*mbp_spec());
  }
};

struct Globals {
  unsigned threads = 1;
  double tolerance = 1e-6;
};

std::ostream& summarize_peaks(std::ostream& out, const ResonanceCatalog& cat, double sqrt_v0) {
  out << "barrier top V0 = " << fmt(cat.barrier_top) << ", sqrt(V0) = " << fmt(sqrt_v0) << '\n';
  out << "sharp peaks below sqrt(V0):\n";
  for (const auto& p : cat.sharp)
    out << "  kappa=" << fmt(p.kappa, 10) << " lnT=" << fmt(p.ln_t) << " prominence=" << fmt(p.prominence)
        << " width=" << fmt(p.width) << '\n';
  out << "diffuse peaks near sqrt(V0):\n";
  for (const auto& p : cat.diffuse)
    out << "  kappa=" << fmt(p.kappa, 10) << " lnT=" << fmt(p.ln_t) << " prominence=" << fmt(p.prominence) << '\n';
  out << "square-well estimates (kappa tau = n pi):\n";
  for (const auto& e : cat.estimates)
    out << "  tau=" << fmt(e.well_width) << " n=" << e.quantum_number << " kappa=" << fmt(e.kappa_estimate) << '\n';
  out << cat.sharp.size() << " sharp peaks below sqrt(V0), " << cat.diffuse.size()
      << " diffuse peaks, beta=" << cat.band_count_beta << ", alpha=" << cat.peak_count_alpha << '\n';
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "-" : "") + fmt(values[i]);
  return s;
}

std::vector<Sample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--samples: cannot open " + path);
  std::vector<Sample> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double x = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      if (lineno == 1) continue;  // header
      throw ConfigError("--samples: line " + std::to_string(lineno) + " is not x,V");
    }
    if (*end != ',') throw ConfigError("--samples: line " + std::to_string(lineno) + " is not x,V");
    const char* rest = end + 1;
    const double v = std::strtod(rest, &end);
    if (end == rest) throw ConfigError("--samples: line " + std::to_string(lineno) + " is not x,V");
    samples.push_back({x, v});
  }
  return samples;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{std::string("steptunnel: exact transmission through piecewise constant barriers.\n") + kUnitsNote,
               "steptunnel"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads for grid evaluation")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", globals.tolerance, "Peak refinement tolerance in kappa")
      ->check(CLI::PositiveNumber);

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "ln T versus kappa on a uniform kappa grid");
  SourceFlags spectrum_src;
  spectrum_src.attach(spectrum_cmd);
  std::string spectrum_kappa;
  std::string spectrum_out;
  spectrum_cmd->add_option("--kappa", spectrum_kappa, "Grid lo:hi:count")->required();
  spectrum_cmd->add_option("-o,--out", spectrum_out, "Output CSV")->required();

  // peaks
  auto* peaks_cmd = app.add_subcommand("peaks", "Locate resonant peaks and compare with kappa tau = n pi");
  SourceFlags peaks_src;
  peaks_src.attach(peaks_cmd);
  std::string peaks_kappa;
  std::string peaks_out;
  peaks_cmd->add_option("--kappa", peaks_kappa, "Search grid lo:hi:count (default 0.02:1.2sqrt(V0):20000)");
  peaks_cmd->add_option("-o,--out", peaks_out, "Also write the report to this file");

  // alias
  auto* alias_cmd = app.add_subcommand("alias", "Compare spectra of well orderings of one multi-barrier train");
  SourceFlags alias_src;
  alias_src.attach(alias_cmd);
  std::vector<std::string> alias_orders;
  bool alias_all = false;
  std::string alias_kappa = "";
  std::string alias_out;
  alias_cmd->add_option("--order", alias_orders, "Well ordering tau_a,tau_b,... (repeatable)");
  alias_cmd->add_flag("--all", alias_all, "Every distinct ordering (limited to 720)");
  alias_cmd->add_option("--kappa", alias_kappa, "Spectrum grid for per-ordering CSVs (default 0.02:1.2sqrt(V0):4000)");
  alias_cmd->add_option("-o,--out", alias_out, "Output directory for the report and spectra")->required();

  // scan2d
  auto* scan_cmd = app.add_subcommand("scan2d", "ln T over the kappa-tau or kappa-tau' plane");
  SourceFlags scan_src;
  scan_src.attach(scan_cmd);
  std::string scan_uniform;
  std::string scan_prime;
  double scan_base_tau = 1;
  std::size_t scan_index = 1;
  std::string scan_kappa;
  std::string scan_out;
  std::string scan_raster;
  std::string scan_overlay;
  int scan_nmax = 0;
  auto* uniform_opt = scan_cmd->add_option("--uniform-tau", scan_uniform, "Uniform well width axis lo:hi:count");
  auto* prime_opt = scan_cmd->add_option("--tau-prime", scan_prime, "Single varied well axis lo:hi:count");
  uniform_opt->excludes(prime_opt);
  scan_cmd->add_option("--base-tau", scan_base_tau, "Width of the other wells for --tau-prime");
  scan_cmd->add_option("--varied-index", scan_index, "1-based index of the varied well for --tau-prime");
  scan_cmd->add_option("--kappa", scan_kappa, "Kappa axis lo:hi:count")->required();
  scan_cmd->add_option("-o,--out", scan_out, "Grid CSV")->required();
  scan_cmd->add_option("--raster", scan_raster, "Portable graymap of ln T (sidecar <path>.txt)");
  scan_cmd->add_option("--overlay", scan_overlay, "CSV of kappa tau = n pi curves");
  scan_cmd->add_option("--overlay-n", scan_nmax, "Number of overlay curves (default 15)");

  // wavefunction
  auto* wave_cmd = app.add_subcommand("wavefunction", "psi(x) at one energy");
  SourceFlags wave_src;
  wave_src.attach(wave_cmd);
  double wave_energy = 0;
  std::string wave_x;
  std::string wave_out;
  std::string wave_incidence = "left";
  bool wave_scale = false;
  wave_cmd->add_option("--energy", wave_energy, "Particle energy E")->required();
  wave_cmd->add_option("--x", wave_x, "Sample grid lo:hi:count (default: barrier span +- 20% with 2000 points)");
  wave_cmd->add_option("--incidence", wave_incidence, "left or right")->check(CLI::IsMember({"left", "right"}));
  wave_cmd->add_flag("--scale-to-barrier", wave_scale, "Scale psi by max(V) / max|psi|");
  wave_cmd->add_option("-o,--out", wave_out, "Output CSV")->required();

  // discretize
  auto* disc_cmd = app.add_subcommand("discretize", "Staircase approximation of a sampled potential");
  std::string disc_samples;
  std::string disc_gaussian;
  std::size_t disc_steps = 0;
  std::string disc_out;
  auto* samples_opt = disc_cmd->add_option("--samples", disc_samples, "CSV of x,V samples sorted in x");
  auto* gauss_opt =
      disc_cmd->add_option("--gaussian", disc_gaussian, "Sample height*exp(-x^2): height,lo,hi,count");
  samples_opt->excludes(gauss_opt);
  disc_cmd->add_option("--steps", disc_steps, "Number of equal-width steps")->required()->check(CLI::PositiveNumber);
  disc_cmd->add_option("-o,--out", disc_out, "Output potential JSON")->required();

  for (auto* sub : app.get_subcommands({})) sub->footer(kUnitsNote);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (spectrum_cmd->parsed()) {
      const auto axis = axis_from(spectrum_kappa, "--kappa");
      const auto potential = spectrum_src.potential();
      const auto rows = spectrum(potential, axis, globals.threads);
      emit(rows, spectrum_out);
      double lo = rows.front().ln_t;
      double hi = rows.front().ln_t;
      for (const auto& r : rows) {
        lo = std::min(lo, r.ln_t);
        hi = std::max(hi, r.ln_t);
      }
      out << "rows: " << rows.size() << "\nmin lnT: " << fmt(lo) << "\nmax lnT: " << fmt(hi) << '\n';
      return kExitOk;
    }

    if (peaks_cmd->parsed()) {
      const auto potential = peaks_src.potential();
      PeakSearchOptions options;
      options.refine_tolerance = globals.tolerance;
      options.threads = globals.threads;
      if (!peaks_kappa.empty()) {
        const auto axis = axis_from(peaks_kappa, "--kappa");
        if (axis.count < 16) throw ConfigError("--kappa: peak search needs at least 16 points");
        options.kappa_lo = axis.lo;
        options.kappa_hi = axis.hi;
        options.grid_points = axis.count;
      }
      const auto catalog = find_peaks(potential, options);
      std::ostringstream report;
      summarize_peaks(report, catalog, std::sqrt(catalog.barrier_top));
      out << report.str();
      if (!peaks_out.empty()) emit_text(report.str(), peaks_out);
      return kExitOk;
    }

    if (alias_cmd->parsed()) {
      const auto spec = alias_src.mbp_spec();
      if (!spec) throw ConfigError("alias needs an MBP source: --mbp m,V0,delta --wells ... or an mbp JSON file");
      if (spec->well_widths.size() < 2) throw ConfigError("--wells: alias needs at least two wells");
      std::vector<std::vector<double>> orders;
      if (alias_all) {
        double factorial = 1;
        for (std::size_t k = 2; k <= spec->well_widths.size(); ++k) factorial *= static_cast<double>(k);
        if (factorial > 720)
          throw ConfigError("--all: (m-1)! = " + fmt(factorial) + " orderings exceeds the limit of 720");
        orders = all_orderings(spec->well_widths);
      }
      for (const auto& text : alias_orders) orders.push_back(parse_list(text, "--order"));
      if (orders.empty()) throw ConfigError("alias needs --order (one or more) or --all");

      AliasOptions options;
      options.search.refine_tolerance = globals.tolerance;
      options.search.threads = globals.threads;
      AliasReport report;
      try {
        report = alias_audit(*spec, orders, options);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::BadPermutation) throw ConfigError(std::string("--order: ") + e.what());
        throw;
      }

      const std::filesystem::path dir(alias_out);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw ConfigError("-o: cannot create directory " + dir.string());

      const double sqrt_v0 = std::sqrt(spec->barrier_height);
      const GridAxis axis = alias_kappa.empty() ? GridAxis{0.02, 1.2 * sqrt_v0, 4000} : axis_from(alias_kappa, "--kappa");

      std::ostringstream text;
      if (report.duplicates_removed > 0)
        text << "note: " << report.duplicates_removed
             << " duplicate orderings removed (repeated widths give identical barriers)\n";
      text << "orderings: " << report.results.size() << '\n';
      for (std::size_t i = 0; i < report.results.size(); ++i) {
        const auto& r = report.results[i];
        MbpSpec s = *spec;
        s.well_widths = r.order;
        const std::string name = "spectrum_" + std::to_string(i) + ".csv";
        emit(spectrum(build_mbp(s), axis, globals.threads), dir / name);
        text << "  [" << i << "] wells " << join(r.order) << ": " << r.sharp_count
             << " sharp peaks below sqrt(V0), matched " << r.match.matched << ", unmatched " << r.match.unmatched
             << ", max |dkappa| " << fmt(r.match.max_discrepancy) << " (" << name << ")\n";
      }
      text << "peak counts equal: " << (report.counts_equal ? "yes" : "no") << '\n';
      text << "max matched location discrepancy: " << fmt(report.max_location_discrepancy) << '\n';
      text << "reversal pairs: " << report.reversal_pairs.size() << '\n';
      for (const auto& p : report.reversal_pairs)
        text << "  [" << p.first << "] <-> [" << p.second << "] max |dT| " << fmt(p.max_t_difference) << '\n';
      emit_text(text.str(), dir / "report.txt");
      out << text.str();
      return kExitOk;
    }

    if (scan_cmd->parsed()) {
      const auto spec = scan_src.mbp_spec(scan_base_tau);
      if (!spec) throw ConfigError("scan2d needs an MBP source (--mbp m,V0,delta)");
      const auto kappa = axis_from(scan_kappa, "--kappa");
      const std::size_t m = spec->barrier_count();
      GridScan scan;
      GridAxis param;
      if (!scan_uniform.empty()) {
        param = axis_from(scan_uniform, "--uniform-tau");
        scan = scan_uniform_tau(m, spec->barrier_height, spec->barrier_width, param, kappa, globals.threads);
      } else if (!scan_prime.empty()) {
        param = axis_from(scan_prime, "--tau-prime");
        if (m < 2 || scan_index < 1 || scan_index > m - 1)
          throw ConfigError("--varied-index must lie in 1.." + std::to_string(m > 0 ? m - 1 : 0));
        scan = scan_single_well(m, spec->barrier_height, spec->barrier_width, scan_base_tau, scan_index, param, kappa,
                                globals.threads);
      } else {
        throw ConfigError("scan2d needs --uniform-tau or --tau-prime");
      }
      emit(scan, EmitFormat::Csv, scan_out);
      if (!scan_raster.empty()) emit(scan, EmitFormat::Raster, scan_raster);
      if (!scan_overlay.empty()) {
        auto lines = overlay_hyperbolas(kappa, param, scan_nmax > 0 ? scan_nmax : 15);
        if (!scan_prime.empty()) {
          const auto verticals = overlay_verticals(kappa, param, scan_base_tau);
          for (auto v : verticals) {
            v.n = -v.n;  // negative n marks the fixed-well verticals
            lines.push_back(std::move(v));
          }
        }
        emit_text(polylines_csv(lines), scan_overlay);
      }
      const auto [lo, hi] = std::minmax_element(scan.values.begin(), scan.values.end());
      out << "grid: " << scan.param_axis.count << " x " << scan.kappa_axis.count << "\nmin lnT: " << fmt(*lo)
          << "\nmax lnT: " << fmt(*hi) << '\n';
      return kExitOk;
    }

    if (wave_cmd->parsed()) {
      const auto potential = wave_src.potential();
      const auto incidence = wave_incidence == "right" ? Incidence::Right : Incidence::Left;
      const auto sol = solve(potential, wave_energy, incidence);
      GridAxis xs;
      if (!wave_x.empty()) {
        xs = parse_axis(wave_x);
        try {
          validate(xs, 2, false);
        } catch (const Error& e) {
          throw ConfigError(std::string("--x: ") + e.what());
        }
      } else {
        const double span = std::max(potential.span_length(), 1.0);
        xs = {potential.breakpoints().front() - 0.2 * span, potential.breakpoints().back() + 0.2 * span, 2000};
      }
      const auto points = xs.values();
      const auto psi = wavefunction(sol, points);
      double scale = 1;
      if (wave_scale) {
        double peak = 0;
        for (const auto& z : psi) peak = std::max(peak, std::abs(z));
        const auto levels = potential.levels();
        const double top = *std::max_element(levels.begin(), levels.end());
        if (peak > 0 && top > 0) scale = top / peak;
      }
      std::string csv = "x,reV,rePsi,imPsi,absPsi\n";
      char buf[160];
      for (std::size_t i = 0; i < points.size(); ++i) {
        const auto z = psi[i] * scale;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", points[i], potential(points[i]), z.real(),
                      z.imag(), std::abs(z));
        csv += buf;
      }
      emit_text(csv, wave_out);
      out << "E = " << fmt(wave_energy) << "\nT = " << fmt(sol.transmission, 12) << "\nR = " << fmt(sol.reflection, 12)
          << "\nlnT = " << fmt(sol.ln_transmission, 12) << '\n';
      return kExitOk;
    }

    if (disc_cmd->parsed()) {
      std::vector<Sample> samples;
      if (!disc_samples.empty()) {
        samples = read_samples(disc_samples);
      } else if (!disc_gaussian.empty()) {
        const auto g = parse_list(disc_gaussian, "--gaussian");
        if (g.size() != 4 || g[3] < 2 || !(g[2] > g[1])) throw ConfigError("--gaussian expects height,lo,hi,count");
        const auto count = static_cast<std::size_t>(g[3]);
        for (std::size_t i = 0; i < count; ++i) {
          const double x = g[1] + (g[2] - g[1]) * static_cast<double>(i) / static_cast<double>(count - 1);
          samples.push_back({x, g[0] * std::exp(-x * x)});
        }
      } else {
        throw ConfigError("discretize needs --samples FILE or --gaussian height,lo,hi,count");
      }
      const auto potential = discretize(samples, disc_steps);
      emit_text(to_json(potential) + "\n", disc_out);
      out << "steps: " << disc_steps << "\nbreakpoints: " << potential.interface_count() << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::EvanescentLead:
      case ErrorCode::UnequalLeads:
      case ErrorCode::ChainOverflow:
      case ErrorCode::NonFiniteCoefficient:
      case ErrorCode::DegenerateKappa:
      case ErrorCode::BothRegionsDegenerate:
        return kExitNumeric;
      default:
        return kExitConfig;
    }
  }
  err << "error: no command given\n";
  return kExitConfig;
}

}  // namespace steptunnel::cli
