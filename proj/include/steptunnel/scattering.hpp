#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "steptunnel/pauli.hpp"
#include "steptunnel/potential.hpp"

namespace steptunnel {

using Complex = std::complex<double>;

/// |E - V| at or below this (relative to max(1, |V|)) switches a region to
/// the linear basis A x + B.
inline constexpr double kZeroKappaThreshold = 1e-9;

bool is_degenerate(double energy, double level);

/// Principal square root of E - V: real and >= 0 above the level, positive
/// imaginary below it, so exp(i kappa x) decays in forbidden regions.
Complex wave_number(double energy, double level);

enum class Basis { Exponential, Linear };
enum class Incidence { Left, Right };
enum class DegenerateSide { Left, Right };

/// One side of an interface: wave number, basis, and the interface position
/// measured from the region's own coordinate origin.
struct InterfaceSide {
  Complex kappa;
  Basis basis;
  double offset;
};

/// Matrix mapping (A, B) of the right region onto (A, B) of the left region,
/// from continuity of psi and psi' at the interface. Exponential factors are
/// pulled into log_scale so entries stay finite.
ScaledPauliVectorD interface_matrix(const InterfaceSide& left, const InterfaceSide& right);

/// Transfer matrix across breakpoint `interface` (0-based, 0..N-1) in
/// absolute coordinates, psi_j = A_j e^{i k_j x} + B_j e^{-i k_j x}.
/// Throws DegenerateKappa when either adjacent region sits at E = V.
PauliVectorD transfer_matrix(const PiecewiseConstantPotential& potential, std::size_t interface, double energy);

/// As transfer_matrix, with the degenerate region on `side` written as A x + B.
/// Throws BothRegionsDegenerate if the other region is degenerate too.
PauliVectorD transfer_matrix_linear(const PiecewiseConstantPotential& potential, std::size_t interface,
                                    double energy, DegenerateSide side);

/// Amplitudes of one region. The region's wave is
///   exp(log_scale) * (a e^{i kappa (x - origin)} + b e^{-i kappa (x - origin)})
/// for the exponential basis and exp(log_scale) * (a (x - origin) + b) for the
/// linear one. Measuring from a local origin keeps evanescent factors bounded
/// by the region width instead of the absolute position.
struct RegionWave {
  Complex kappa;
  Basis basis = Basis::Exponential;
  double origin = 0;
  Complex a;
  Complex b;
  double log_scale = 0;

  Complex amplitude_a() const { return a * std::exp(log_scale); }
  Complex amplitude_b() const { return b * std::exp(log_scale); }
  Complex psi(double x) const;
  Complex dpsi(double x) const;
  /// kappa (|A|^2 - |B|^2); real and region-independent for propagating waves.
  double flux() const;
};

struct ScatteringSolution {
  double energy = 0;
  Incidence incidence = Incidence::Left;
  std::vector<double> breakpoints;
  std::vector<RegionWave> regions;
  double transmission = 0;
  double reflection = 0;
  double ln_transmission = 0;
  double chain_log_scale = 0;

  const RegionWave& region_at(double x) const;
};

struct Transmission {
  double t = 0;
  double r = 0;
  double ln_t = 0;
};

/// T and R only, from one fold of the interface chain.
Transmission transmit(const PiecewiseConstantPotential& potential, double energy,
                      Incidence incidence = Incidence::Left);

/// Full solution with amplitudes in every region. The seed fixes A_{N+1}
/// for left incidence and B_1 for right incidence.
ScatteringSolution solve(const PiecewiseConstantPotential& potential, double energy,
                         Incidence incidence = Incidence::Left, Complex seed = 1.0);

std::vector<Complex> wavefunction(const ScatteringSolution& solution, std::span<const double> xs);

}  // namespace steptunnel
