#pragma once

// Pauli-basis algebra for 2x2 complex matrices.
//
// A matrix M is stored as four coefficients c^p with M = sum_p c^p sigma_p,
// where sigma_0 is the identity and sigma_1..3 are the Pauli matrices.
// Products are formed directly on the coefficients through the index maps
// phi(a, b) and eps(a, b, c), which encode sigma_q sigma_phi(p,q) =
// i^eps(p,q,phi(p,q)) sigma_p.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "steptunnel/error.hpp"

namespace steptunnel {

template <typename Scalar>
using ComplexMatrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Nonnegative residue of (a + b (-1)^(a+b-1)) mod 4.
constexpr int phi(int a, int b) {
  const int sign = ((a + b - 1) % 2 == 0) ? 1 : -1;
  const int r = (a + b * sign) % 4;
  return r < 0 ? r + 4 : r;
}

/// (a-b)(b-c)(c-a)/2; the product is always even for integer arguments.
constexpr int epsilon(int a, int b, int c) { return (a - b) * (b - c) * (c - a) / 2; }

namespace detail {

struct ComposeEntry {
  int partner;  // phi(p, q)
  int phase;    // eps(p, q, phi(p, q)) mod 4, so the factor is i^phase
};

constexpr std::array<std::array<ComposeEntry, 4>, 4> make_compose_table() {
  std::array<std::array<ComposeEntry, 4>, 4> table{};
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      const int r = phi(p, q);
      const int e = ((epsilon(p, q, r) % 4) + 4) % 4;
      table[p][q] = {r, e};
    }
  }
  return table;
}

inline constexpr auto kComposeTable = make_compose_table();

// z * i^k without a complex multiply.
template <typename Scalar>
constexpr std::complex<Scalar> times_i_pow(std::complex<Scalar> z, int k) {
  switch (k & 3) {
    case 0: return z;
    case 1: return {-z.imag(), z.real()};
    case 2: return -z;
    default: return {z.imag(), -z.real()};
  }
}

}  // namespace detail

/// Phase factor i^k as a complex number.
template <typename Scalar>
std::complex<Scalar> i_pow(int k) {
  return detail::times_i_pow(std::complex<Scalar>(1, 0), ((k % 4) + 4) % 4);
}

/// sigma_p as a dense matrix.
template <typename Scalar>
ComplexMatrix2<Scalar> pauli_matrix(int p) {
  using C = std::complex<Scalar>;
  ComplexMatrix2<Scalar> m;
  switch (p) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    default: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

template <typename Scalar>
struct PauliVector {
  using Complex = std::complex<Scalar>;
  std::array<Complex, 4> c{};

  static PauliVector identity() { return {{Complex(1), Complex(0), Complex(0), Complex(0)}}; }

  const Complex& operator[](std::size_t p) const { return c[p]; }
  Complex& operator[](std::size_t p) { return c[p]; }

  Scalar max_abs() const {
    Scalar m = 0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    for (const auto& z : c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  PauliVector operator*(Scalar s) const {
    PauliVector out = *this;
    for (auto& z : out.c) z *= s;
    return out;
  }

  // Matrix entries read straight off the basis.
  Complex m11() const { return c[0] + c[3]; }
  Complex m12() const { return c[1] - Complex(0, 1) * c[2]; }
  Complex m21() const { return c[1] + Complex(0, 1) * c[2]; }
  Complex m22() const { return c[0] - c[3]; }

  Complex determinant() const { return c[0] * c[0] - c[1] * c[1] - c[2] * c[2] - c[3] * c[3]; }

  bool operator==(const PauliVector&) const = default;
};

template <typename Scalar>
ComplexMatrix2<Scalar> to_matrix(const PauliVector<Scalar>& v) {
  ComplexMatrix2<Scalar> m;
  m << v.m11(), v.m12(), v.m21(), v.m22();
  return m;
}

/// c^p = trace(M sigma_p) / 2.
template <typename Scalar>
PauliVector<Scalar> from_matrix(const ComplexMatrix2<Scalar>& m) {
  PauliVector<Scalar> v;
  for (int p = 0; p < 4; ++p) v.c[p] = (m * pauli_matrix<Scalar>(p)).trace() / Scalar(2);
  return v;
}

/// Coefficients of the product (matrix of lhs) * (matrix of rhs).
template <typename Scalar>
PauliVector<Scalar> compose(const PauliVector<Scalar>& lhs, const PauliVector<Scalar>& rhs) {
  PauliVector<Scalar> out;
  for (int p = 0; p < 4; ++p) {
    std::complex<Scalar> acc(0);
    for (int q = 0; q < 4; ++q) {
      const auto& e = detail::kComposeTable[p][q];
      acc += detail::times_i_pow(lhs.c[q] * rhs.c[e.partner], e.phase);
    }
    out.c[p] = acc;
  }
  return out;
}

/// Matrix inverse in the Pauli basis: (c0, -c1, -c2, -c3) / det.
template <typename Scalar>
PauliVector<Scalar> inverse(const PauliVector<Scalar>& v) {
  const auto det = v.determinant();
  PauliVector<Scalar> out;
  out.c[0] = v.c[0] / det;
  for (int p = 1; p < 4; ++p) out.c[p] = -v.c[p] / det;
  return out;
}

/// A Pauli vector times exp(log_scale). The stored vector is kept near unit
/// magnitude so that long chains of growing or decaying factors stay finite.
template <typename Scalar>
struct ScaledPauliVector {
  PauliVector<Scalar> vector = PauliVector<Scalar>::identity();
  Scalar log_scale = 0;

  static ScaledPauliVector identity() { return {}; }

  /// Rescale by a power of two so the largest coefficient lies in [0.5, 1).
  /// Power-of-two scaling is exact, so only log_scale absorbs rounding.
  void normalize() {
    const Scalar m = vector.max_abs();
    if (m == 0 || !std::isfinite(m)) return;
    int exponent = 0;
    std::frexp(m, &exponent);
    for (auto& z : vector.c) z = {std::ldexp(z.real(), -exponent), std::ldexp(z.imag(), -exponent)};
    log_scale += exponent * std::log(Scalar(2));
  }

  /// Renormalize only when the magnitude drifts out of [2^-512, 2^512].
  void normalize_if_needed() {
    const Scalar m = vector.max_abs();
    constexpr Scalar lo = 0x1p-512;
    constexpr Scalar hi = 0x1p+512;
    if (m < lo || m > hi) normalize();
  }

  ComplexMatrix2<Scalar> matrix() const { return to_matrix(vector) * std::exp(log_scale); }
  PauliVector<Scalar> value() const { return vector * std::exp(log_scale); }
};

template <typename Scalar>
ScaledPauliVector<Scalar> make_scaled(const PauliVector<Scalar>& v) {
  ScaledPauliVector<Scalar> s{v, 0};
  s.normalize();
  return s;
}

template <typename Scalar>
ScaledPauliVector<Scalar> compose(const ScaledPauliVector<Scalar>& lhs, const ScaledPauliVector<Scalar>& rhs) {
  ScaledPauliVector<Scalar> out{compose(lhs.vector, rhs.vector), lhs.log_scale + rhs.log_scale};
  out.normalize_if_needed();
  return out;
}

namespace detail {

template <typename Scalar>
void check_finite(const ScaledPauliVector<Scalar>& acc) {
  if (!acc.vector.all_finite() || !std::isfinite(acc.log_scale))
    throw Error(ErrorCode::NonFiniteCoefficient, "chain product produced a non-finite coefficient");
}

}  // namespace detail

/// Ordered product chain[0] * chain[1] * ... * chain[n-1], folded left to right.
template <typename Scalar>
ScaledPauliVector<Scalar> fold_chain(std::span<const ScaledPauliVector<Scalar>> chain) {
  if (chain.empty()) throw Error(ErrorCode::EmptyChain, "fold_chain needs at least one factor");
  ScaledPauliVector<Scalar> acc = chain.front();
  acc.normalize_if_needed();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    acc = compose(acc, chain[i]);
    detail::check_finite(acc);
  }
  acc.normalize();
  detail::check_finite(acc);
  return acc;
}

template <typename Scalar>
ScaledPauliVector<Scalar> fold_chain(std::span<const PauliVector<Scalar>> chain) {
  if (chain.empty()) throw Error(ErrorCode::EmptyChain, "fold_chain needs at least one factor");
  ScaledPauliVector<Scalar> acc = make_scaled(chain.front());
  for (std::size_t i = 1; i < chain.size(); ++i) {
    acc = compose(acc, make_scaled(chain[i]));
    detail::check_finite(acc);
  }
  acc.normalize();
  detail::check_finite(acc);
  return acc;
}

template <typename Scalar>
ScaledPauliVector<Scalar> fold_chain(const std::vector<PauliVector<Scalar>>& chain) {
  return fold_chain(std::span<const PauliVector<Scalar>>(chain));
}

template <typename Scalar>
ScaledPauliVector<Scalar> fold_chain(const std::vector<ScaledPauliVector<Scalar>>& chain) {
  return fold_chain(std::span<const ScaledPauliVector<Scalar>>(chain));
}

/// All suffix products: result[k] = chain[k] * chain[k+1] * ... * chain[n-1].
/// One right-to-left sweep, so the cost is linear in the chain length.
template <typename Scalar>
std::vector<ScaledPauliVector<Scalar>> suffix_products(std::span<const ScaledPauliVector<Scalar>> chain) {
  std::vector<ScaledPauliVector<Scalar>> out(chain.size());
  if (chain.empty()) return out;
  ScaledPauliVector<Scalar> acc = chain.back();
  acc.normalize();
  out.back() = acc;
  for (std::size_t k = chain.size() - 1; k-- > 0;) {
    acc = compose(chain[k], acc);
    acc.normalize();
    detail::check_finite(acc);
    out[k] = acc;
  }
  return out;
}

/// Literal nested multi-sum for the product of a short chain, with q_0 = 0.
/// Costs 4^(m-1) terms per output coefficient; kept as a cross-check of the
/// pairwise fold.
template <typename Scalar>
PauliVector<Scalar> explicit_product(std::span<const PauliVector<Scalar>> chain, std::size_t max_len = 8) {
  const std::size_t m = chain.size();
  if (m == 0) throw Error(ErrorCode::EmptyChain, "explicit_product needs at least one factor");
  if (m > max_len)
    throw Error(ErrorCode::ChainTooLong, "explicit_product chain length " + std::to_string(m) +
                                             " exceeds max_len " + std::to_string(max_len));
  if (m == 1) return chain.front();

  PauliVector<Scalar> out;
  std::vector<int> q(m, 0);  // q[0] fixed at 0, q[1..m-1] summed
  for (int p = 0; p < 4; ++p) {
    std::complex<Scalar> total(0);
    std::fill(q.begin(), q.end(), 0);
    while (true) {
      std::complex<Scalar> term(1);
      int phase = 0;
      for (std::size_t j = 1; j < m; ++j) {
        const int r = phi(q[j], q[j - 1]);
        term *= chain[j - 1].c[r];
        phase += epsilon(q[j], q[j - 1], r);
      }
      const int r = phi(p, q[m - 1]);
      term *= chain[m - 1].c[r];
      phase += epsilon(p, q[m - 1], r);
      total += detail::times_i_pow(term, ((phase % 4) + 4) % 4);

      std::size_t j = 1;
      while (j < m && ++q[j] == 4) q[j++] = 0;
      if (j == m) break;
    }
    out.c[p] = total;
  }
  return out;
}

template <typename Scalar>
PauliVector<Scalar> explicit_product(const std::vector<PauliVector<Scalar>>& chain, std::size_t max_len = 8) {
  return explicit_product(std::span<const PauliVector<Scalar>>(chain), max_len);
}

using PauliVectorD = PauliVector<double>;
using ScaledPauliVectorD = ScaledPauliVector<double>;
using ComplexMatrix2D = ComplexMatrix2<double>;

}  // namespace steptunnel
