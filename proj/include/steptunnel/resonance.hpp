#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steptunnel/potential.hpp"

namespace steptunnel {

/// Infinite-square-well estimate kappa = n pi / tau.
struct ResonanceEstimate {
  double well_width = 0;
  int quantum_number = 0;
  double kappa_estimate = 0;
};

struct Peak {
  double kappa = 0;
  double ln_t = 0;
  double width = 0;       // full width at half of the prominence, in kappa
  double prominence = 0;  // rise above the lower flanking minimum of ln T
};

struct ResonanceCatalog {
  std::vector<Peak> peaks;  // every retained local maximum, sorted by kappa
  std::vector<Peak> sharp;  // kappa < sqrt(V0), prominence >= sharp floor
  std::vector<Peak> diffuse;  // in the diffuse band, not sharp
  std::vector<ResonanceEstimate> estimates;
  int band_count_beta = 0;
  int peak_count_alpha = 0;
  double barrier_top = 0;  // V0 measured from the lead level
};

/// floor(tau sqrt(V0) / pi).
int band_count(double tau, double v0);

/// Sum of band_count over distinct well widths.
int peak_count(std::span<const double> well_widths, double v0);

/// Every (tau, n) with n pi / tau <= kappa_max, one entry per distinct width,
/// sorted by kappa_estimate.
std::vector<ResonanceEstimate> estimates(std::span<const double> well_widths, double v0, double kappa_max);

/// Distinct widths; values within 1e-12 relative of each other are one width.
std::vector<double> distinct_widths(std::span<const double> well_widths);

/// Widths of interior regions whose level is below both neighbours.
std::vector<double> well_widths(const PiecewiseConstantPotential& potential);

struct PeakSearchOptions {
  double kappa_lo = 0.02;
  double kappa_hi = 0;  // 0 selects 1.2 sqrt(V0)
  std::size_t grid_points = 20000;
  double refine_tolerance = 1e-6;
  double sharp_floor = 0.5;
  double diffuse_floor = 0.1;
  double diffuse_band_lo = 0.95;  // in units of sqrt(V0)
  double diffuse_band_hi = 1.2;
  std::optional<double> barrier_top;  // default: max level minus lead level
  unsigned threads = 1;
};

ResonanceCatalog find_peaks(const PiecewiseConstantPotential& potential, const PeakSearchOptions& options = {});

/// Matching between a permutation's peaks and the reference permutation's.
struct PeakMatch {
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  double max_discrepancy = 0;  // over matched pairs
};

struct PermutationResult {
  std::vector<double> order;
  std::size_t sharp_count = 0;
  std::vector<double> sharp_locations;
  PeakMatch match;  // against results[0]
};

struct ReversalPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double max_t_difference = 0;
};

struct AliasReport {
  std::vector<PermutationResult> results;
  std::vector<ReversalPair> reversal_pairs;
  std::size_t duplicates_removed = 0;
  bool counts_equal = true;
  double max_location_discrepancy = 0;
  std::size_t total_unmatched = 0;
  double max_reversal_difference = 0;
};

struct AliasOptions {
  PeakSearchOptions search;
  double match_gate = 1e-2;
  std::size_t curve_points = 4000;  // grid for the reversal-pair T comparison
};

/// Every distinct ordering of the multiset of widths, in lexicographic order.
std::vector<std::vector<double>> all_orderings(std::vector<double> widths);

/// Runs find_peaks for each ordering of spec.well_widths and compares them.
/// Throws BadPermutation if an ordering is not a rearrangement of the spec's wells.
AliasReport alias_audit(const MbpSpec& spec, const std::vector<std::vector<double>>& orderings,
                        const AliasOptions& options = {});

/// Greedy nearest-neighbour matching with an absolute gate.
PeakMatch match_peaks(std::span<const double> reference, std::span<const double> candidate, double gate);

}  // namespace steptunnel
