#include "steptunnel/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "steptunnel/error.hpp"

namespace steptunnel {

namespace {

constexpr Complex kI(0.0, 1.0);

PauliVectorD from_entries(Complex m11, Complex m12, Complex m21, Complex m22) {
  return {{(m11 + m22) / 2.0, (m12 + m21) / 2.0, kI * (m12 - m21) / 2.0, (m11 - m22) / 2.0}};
}

// Entries given as coefficient * exp(exponent); the largest real part of the
// exponents goes into log_scale.
ScaledPauliVectorD scaled_from_terms(const std::array<Complex, 4>& coef, const std::array<Complex, 4>& exponent) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& z : exponent) shift = std::max(shift, z.real());
  std::array<Complex, 4> m;
  for (std::size_t i = 0; i < 4; ++i) m[i] = coef[i] * std::exp(exponent[i] - shift);
  ScaledPauliVectorD out{from_entries(m[0], m[1], m[2], m[3]), shift};
  out.normalize();
  return out;
}

InterfaceSide side_of(const PiecewiseConstantPotential& potential, std::size_t region, double energy,
                      double offset) {
  const double level = potential.levels()[region];
  const bool flat = is_degenerate(energy, level);
  return {flat ? Complex(0.0) : wave_number(energy, level), flat ? Basis::Linear : Basis::Exponential, offset};
}

void check_interface(const PiecewiseConstantPotential& potential, std::size_t interface) {
  if (interface >= potential.interface_count())
    throw Error(ErrorCode::InvalidInterface, "interface " + std::to_string(interface) + " out of range");
}

// Local origins: the left lead is measured from x_1, every other region from
// its left breakpoint.
double region_origin(std::span<const double> xs, std::size_t region) {
  return region == 0 ? xs.front() : xs[region - 1];
}

std::vector<RegionWave> region_skeleton(const PiecewiseConstantPotential& potential, double energy) {
  const auto xs = potential.breakpoints();
  std::vector<RegionWave> regions(potential.region_count());
  for (std::size_t j = 0; j < regions.size(); ++j) {
    const auto side = side_of(potential, j, energy, 0.0);
    regions[j].kappa = side.kappa;
    regions[j].basis = side.basis;
    regions[j].origin = region_origin(xs, j);
  }
  return regions;
}

std::vector<ScaledPauliVectorD> local_chain(const PiecewiseConstantPotential& potential,
                                            const std::vector<RegionWave>& regions) {
  const auto xs = potential.breakpoints();
  std::vector<ScaledPauliVectorD> chain(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const InterfaceSide left{regions[j].kappa, regions[j].basis, xs[j] - regions[j].origin};
    const InterfaceSide right{regions[j + 1].kappa, regions[j + 1].basis, 0.0};
    chain[j] = interface_matrix(left, right);
  }
  return chain;
}

ScaledPauliVectorD scaled_inverse(const ScaledPauliVectorD& m) {
  ScaledPauliVectorD out{inverse(m.vector), -m.log_scale};
  out.normalize();
  return out;
}

void check_leads(const PiecewiseConstantPotential& potential, double energy) {
  if (potential.left_lead() != potential.right_lead())
    throw Error(ErrorCode::UnequalLeads, "transmission requires equal lead levels, got " +
                                             std::to_string(potential.left_lead()) + " and " +
                                             std::to_string(potential.right_lead()));
  const double lead = potential.left_lead();
  if (!(energy > lead) || is_degenerate(energy, lead))
    throw Error(ErrorCode::EvanescentLead, "energy " + std::to_string(energy) +
                                               " does not exceed the lead level " + std::to_string(lead));
}

// T and R from the full chain product P; for left incidence the incident
// amplitude is P11, for right incidence it is P22.
Transmission coefficients(const ScaledPauliVectorD& product, Incidence incidence) {
  const auto& v = product.vector;
  const Complex incident = incidence == Incidence::Left ? v.m11() : v.m22();
  const Complex reflected = incidence == Incidence::Left ? v.m21() : v.m12();
  Transmission out;
  out.ln_t = -2.0 * (product.log_scale + std::log(std::abs(incident)));
  out.t = std::exp(out.ln_t);
  out.r = std::norm(reflected) / std::norm(incident);
  if (!std::isfinite(out.ln_t) || !std::isfinite(out.r))
    throw Error(ErrorCode::ChainOverflow, "transfer chain lost precision");
  return out;
}

}  // namespace

bool is_degenerate(double energy, double level) {
  return std::abs(energy - level) <= kZeroKappaThreshold * std::max(1.0, std::abs(level));
}

Complex wave_number(double energy, double level) { return std::sqrt(Complex(energy - level, 0.0)); }

ScaledPauliVectorD interface_matrix(const InterfaceSide& left, const InterfaceSide& right) {
  const Complex k = left.kappa;
  const Complex kr = right.kappa;
  const double s = left.offset;
  const double sr = right.offset;

  if (left.basis == Basis::Exponential && right.basis == Basis::Exponential) {
    const Complex sum = (k + kr) / (2.0 * k);
    const Complex diff = (k - kr) / (2.0 * k);
    const Complex z = kI * (kr * sr - k * s);
    const Complex w = kI * (kr * sr + k * s);
    return scaled_from_terms({sum, diff, diff, sum}, {z, -w, w, -z});
  }
  if (left.basis == Basis::Linear && right.basis == Basis::Exponential) {
    const Complex z = kI * kr * sr;
    return scaled_from_terms({kI * kr, -kI * kr, 1.0 - kI * kr * s, 1.0 + kI * kr * s}, {z, -z, z, -z});
  }
  if (left.basis == Basis::Exponential && right.basis == Basis::Linear) {
    const Complex inv = 1.0 / (kI * k);
    const Complex z = kI * k * s;
    return scaled_from_terms({(sr + inv) / 2.0, Complex(0.5), (sr - inv) / 2.0, Complex(0.5)}, {-z, -z, z, z});
  }
  // A x + B on both sides: a fictitious interface inside one flat region
  return make_scaled(from_entries(1.0, 0.0, Complex(sr - s), 1.0));
}

PauliVectorD transfer_matrix(const PiecewiseConstantPotential& potential, std::size_t interface, double energy) {
  check_interface(potential, interface);
  const double x = potential.breakpoints()[interface];
  const auto left = side_of(potential, interface, energy, x);
  const auto right = side_of(potential, interface + 1, energy, x);
  if (left.basis == Basis::Linear || right.basis == Basis::Linear)
    throw Error(ErrorCode::DegenerateKappa,
                "E = V next to interface " + std::to_string(interface) + "; use transfer_matrix_linear");
  return interface_matrix(left, right).value();
}

PauliVectorD transfer_matrix_linear(const PiecewiseConstantPotential& potential, std::size_t interface,
                                    double energy, DegenerateSide side) {
  check_interface(potential, interface);
  const double x = potential.breakpoints()[interface];
  auto left = side_of(potential, interface, energy, x);
  auto right = side_of(potential, interface + 1, energy, x);
  auto& flat = side == DegenerateSide::Left ? left : right;
  auto& other = side == DegenerateSide::Left ? right : left;
  if (other.basis == Basis::Linear)
    throw Error(ErrorCode::BothRegionsDegenerate,
                "both regions next to interface " + std::to_string(interface) + " sit at E = V");
  flat.kappa = 0.0;
  flat.basis = Basis::Linear;
  return interface_matrix(left, right).value();
}

Complex RegionWave::psi(double x) const {
  const double u = x - origin;
  if (basis == Basis::Linear) return (a * u + b) * std::exp(log_scale);
  return a * std::exp(log_scale + kI * kappa * u) + b * std::exp(log_scale - kI * kappa * u);
}

Complex RegionWave::dpsi(double x) const {
  const double u = x - origin;
  if (basis == Basis::Linear) return a * std::exp(log_scale);
  return kI * kappa * (a * std::exp(log_scale + kI * kappa * u) - b * std::exp(log_scale - kI * kappa * u));
}

double RegionWave::flux() const {
  return (kappa * (std::norm(amplitude_a()) - std::norm(amplitude_b()))).real();
}

const RegionWave& ScatteringSolution::region_at(double x) const {
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  return regions[static_cast<std::size_t>(it - breakpoints.begin())];
}

Transmission transmit(const PiecewiseConstantPotential& potential, double energy, Incidence incidence) {
  check_leads(potential, energy);
  const auto regions = region_skeleton(potential, energy);
  auto chain = local_chain(potential, regions);
  if (incidence == Incidence::Left) return coefficients(fold_chain(chain), incidence);

  // right incidence: theta_{N+1} = M_N^-1 ... M_1^-1 theta_1
  std::vector<ScaledPauliVectorD> inverted(chain.size());
  for (std::size_t j = 0; j < chain.size(); ++j) inverted[chain.size() - 1 - j] = scaled_inverse(chain[j]);
  return coefficients(fold_chain(inverted), incidence);
}

ScatteringSolution solve(const PiecewiseConstantPotential& potential, double energy, Incidence incidence,
                         Complex seed) {
  check_leads(potential, energy);
  ScatteringSolution sol;
  sol.energy = energy;
  sol.incidence = incidence;
  sol.breakpoints.assign(potential.breakpoints().begin(), potential.breakpoints().end());
  sol.regions = region_skeleton(potential, energy);
  const auto chain = local_chain(potential, sol.regions);
  const std::size_t n = chain.size();

  if (incidence == Incidence::Left) {
    // mu_j = M_j ... M_N in one right-to-left sweep; theta_j = mu_j (seed, 0)
    const auto mu = suffix_products(std::span<const ScaledPauliVectorD>(chain));
    for (std::size_t j = 0; j < n; ++j) {
      auto& r = sol.regions[j];
      r.a = mu[j].vector.m11() * seed;
      r.b = mu[j].vector.m21() * seed;
      r.log_scale = mu[j].log_scale;
    }
    sol.regions[n].a = seed;
    sol.regions[n].b = 0.0;
    const auto c = coefficients(mu.front(), incidence);
    sol.transmission = c.t;
    sol.reflection = c.r;
    sol.ln_transmission = c.ln_t;
    sol.chain_log_scale = mu.front().log_scale;
  } else {
    // Q_j = M_{j-1}^-1 ... M_1^-1 maps theta_1 = (0, seed) onto theta_j
    std::vector<ScaledPauliVectorD> inverted(n);
    for (std::size_t j = 0; j < n; ++j) inverted[n - 1 - j] = scaled_inverse(chain[j]);
    const auto q = suffix_products(std::span<const ScaledPauliVectorD>(inverted));
    sol.regions[0].a = 0.0;
    sol.regions[0].b = seed;
    for (std::size_t k = 0; k < n; ++k) {
      auto& r = sol.regions[n - k];
      r.a = q[k].vector.m12() * seed;
      r.b = q[k].vector.m22() * seed;
      r.log_scale = q[k].log_scale;
    }
    const auto c = coefficients(q.front(), incidence);
    sol.transmission = c.t;
    sol.reflection = c.r;
    sol.ln_transmission = c.ln_t;
    sol.chain_log_scale = q.front().log_scale;
  }
  return sol;
}

std::vector<Complex> wavefunction(const ScatteringSolution& solution, std::span<const double> xs) {
  std::vector<Complex> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(solution.region_at(x).psi(x));
  return out;
}

}  // namespace steptunnel
