#include <doctest.h>

#include <random>

#include "steptunnel/pauli.hpp"
#include "test_support.hpp"

using namespace steptunnel;
using C = std::complex<double>;

TEST_CASE("phi and epsilon worked examples") {
  CHECK(phi(0, 0) == 0);
  CHECK(phi(1, 1) == 0);
  CHECK(phi(1, 2) == 3);
  CHECK(phi(2, 1) == 3);
  CHECK(phi(3, 0) == 3);
  CHECK(phi(0, 3) == 3);
  CHECK(phi(3, 3) == 0);
  CHECK(epsilon(1, 2, 3) == 1);
  CHECK(epsilon(2, 1, 3) == -1);
  CHECK(epsilon(0, 0, 2) == 0);
  CHECK(epsilon(0, 1, 3) == 3);
}

TEST_CASE("Pauli table holds for all 16 index pairs") {
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      const int r = phi(p, q);
      const ComplexMatrix2D lhs = pauli_matrix<double>(q) * pauli_matrix<double>(r);
      const ComplexMatrix2D rhs = i_pow<double>(epsilon(p, q, r)) * pauli_matrix<double>(p);
      CAPTURE(p);
      CAPTURE(q);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("to_matrix and from_matrix round trip") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto v = test::random_pauli(rng, 3.0);
    const auto back = from_matrix(to_matrix(v));
    for (int p = 0; p < 4; ++p) CHECK(std::abs(back[p] - v[p]) < 1e-14);
  }
}

TEST_CASE("compose agrees with matrix multiplication") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto a = test::random_pauli(rng, 2.0);
    const auto b = test::random_pauli(rng, 2.0);
    const ComplexMatrix2D expected = to_matrix(a) * to_matrix(b);
    CHECK(test::rel_diff(to_matrix(compose(a, b)), expected) < 1e-14);
  }
}

TEST_CASE("compose is associative and inverse undoes it") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto a = test::random_pauli(rng, 1.0);
    const auto b = test::random_pauli(rng, 1.0);
    const auto c = test::random_pauli(rng, 1.0);
    const auto left = to_matrix(compose(compose(a, b), c));
    const auto right = to_matrix(compose(a, compose(b, c)));
    CHECK(test::rel_diff(left, right) < 1e-13);
    const auto id = compose(a, inverse(a));
    CHECK(std::abs(id[0] - C(1)) < 1e-12);
    for (int p = 1; p < 4; ++p) CHECK(std::abs(id[p]) < 1e-12);
  }
}

TEST_CASE("fold_chain matches a log-scaled direct product") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {1u, 2u, 7u, 300u, 2000u}) {
    std::vector<PauliVectorD> chain;
    for (std::size_t k = 0; k < n; ++k) chain.push_back(test::random_pauli(rng, 1.0));
    const auto folded = fold_chain(chain);
    const auto direct = test::direct_product(chain);
    CAPTURE(n);
    CHECK(test::scaled_rel_diff(folded, direct) < 1e-10);
  }
}

TEST_CASE("fold_chain keeps huge and tiny chains finite") {
  PauliVectorD big{{C(1e200), C(0), C(0), C(0)}};
  std::vector<PauliVectorD> chain(10, big);
  const auto folded = fold_chain(chain);
  CHECK(folded.vector.all_finite());
  const double total = folded.log_scale + std::log(std::abs(folded.vector[0]));
  CHECK(total == doctest::Approx(2000 * std::log(10.0)).epsilon(1e-12));
  CHECK(std::abs(folded.vector[0]) >= 0.5);
  CHECK(std::abs(folded.vector[0]) < 1.0);

  PauliVectorD tiny{{C(1e-250), C(0), C(0), C(0)}};
  const auto small = fold_chain(std::vector<PauliVectorD>(8, tiny));
  CHECK(small.log_scale + std::log(std::abs(small.vector[0])) == doctest::Approx(-2000 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("fold_chain errors") {
  CHECK_THROWS_AS(fold_chain(std::vector<PauliVectorD>{}), Error);
  PauliVectorD bad{{C(std::nan("")), C(0), C(0), C(0)}};
  try {
    fold_chain(std::vector<PauliVectorD>{PauliVectorD::identity(), bad});
    FAIL("expected NonFiniteCoefficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteCoefficient);
  }
}

TEST_CASE("suffix_products returns every tail product") {
  std::mt19937_64 rng(23);
  std::vector<ScaledPauliVectorD> chain;
  for (int k = 0; k < 12; ++k) chain.push_back(make_scaled(test::random_pauli(rng, 4.0)));
  const auto tails = suffix_products<double>(chain);
  REQUIRE(tails.size() == chain.size());
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const auto expected = fold_chain(std::span<const ScaledPauliVectorD>(chain).subspan(j));
    CHECK(test::scaled_rel_diff(tails[j], expected) < 1e-12);
  }
}

TEST_CASE("explicit_product expands the index sum") {
  std::mt19937_64 rng(29);
  for (std::size_t n = 1; n <= 8; ++n) {
    std::vector<PauliVectorD> chain;
    for (std::size_t k = 0; k < n; ++k) chain.push_back(test::random_pauli(rng, 1.0));
    const auto expanded = explicit_product(chain);
    const auto folded = fold_chain(chain).value();
    for (int p = 0; p < 4; ++p) CHECK(std::abs(expanded[p] - folded[p]) <= 1e-12 * std::max(1.0, folded.max_abs()));
  }
  std::vector<PauliVectorD> long_chain(9, PauliVectorD::identity());
  CHECK_THROWS_AS(explicit_product(long_chain), Error);
}

TEST_CASE("single precision instantiation") {
  PauliVector<float> a{{std::complex<float>(1), std::complex<float>(0.5f), {}, {}}};
  const auto s = fold_chain(std::vector<PauliVector<float>>{a, a});
  CHECK(std::abs(s.value()[0] - std::complex<float>(1.25f)) < 1e-6f);
}
