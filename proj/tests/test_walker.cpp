#include <doctest.h>

#include <cmath>
#include <random>

#include "mring/error.hpp"
#include "mring/spectral_numeric.hpp"
#include "mring/walker.hpp"

using namespace mring;

namespace {

WalkerState random_state(std::size_t sites, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(2 * sites));
  for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
  return WalkerState(v);
}

double max_diff(const WalkerState& a, const WalkerState& b) {
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ring config validation") {
  CHECK_THROWS_AS(RingConfig(0, 3, 0.25 * kPi), ConfigError);
  CHECK_THROWS_AS(RingConfig(3, 0, 0.25 * kPi), ConfigError);
  CHECK_THROWS_AS(RingConfig(3, 3, 0.0), ConfigError);
  CHECK_THROWS_AS(RingConfig(3, 3, 0.5 * kPi), ConfigError);
  const RingConfig r(7, 7, 0.25 * kPi);
  CHECK(r.size() == 14);
  CHECK(r.symmetric());
  CHECK(r.half() == 7);
  CHECK_FALSE(RingConfig(4, 6, 0.25 * kPi).symmetric());
  CHECK_THROWS_AS(RingConfig(4, 6, 0.25 * kPi).half(), ConfigError);
}

TEST_CASE("coin matrix") {
  SUBCASE("theta = pi/4, alpha = 0") {
    const CoinMatrix c = coin_matrix(0.25 * kPi, 0.0);
    const double h = std::sqrt(0.5);
    CHECK(std::abs(c(0, 0) - h) < 1e-15);
    CHECK(std::abs(c(0, 1) - h) < 1e-15);
    CHECK(std::abs(c(1, 0) + h) < 1e-15);
    CHECK(std::abs(c(1, 1) - h) < 1e-15);
  }
  SUBCASE("identity at zero angle") {
    CHECK((coin_matrix(0.0, 0.0) - CoinMatrix::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("unitary with field") {
    const double a = 0.05 * kPi;
    const CoinMatrix c = coin_matrix(0.25 * kPi, a);
    CHECK(std::abs(c(0, 0) - std::cos(0.25 * kPi) * std::polar(1.0, -a)) < 1e-15);
    CHECK(std::abs(c(1, 0) + std::sin(0.25 * kPi) * std::polar(1.0, a)) < 1e-15);
    CHECK((c.adjoint() * c - CoinMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("ring coin field") {
  const auto f = ring_coin_field(RingConfig(7, 7, 0.25 * kPi));
  REQUIRE(f.size() == 14);
  for (std::size_t n = 0; n < 7; ++n) CHECK(f.theta[n] == doctest::Approx(0.25 * kPi));
  for (std::size_t n = 7; n < 14; ++n) CHECK(f.theta[n] == doctest::Approx(-0.25 * kPi));

  const auto minimal = ring_coin_field(RingConfig(1, 1, 0.3));
  CHECK(minimal.theta == std::vector<double>{0.3, -0.3});

  const auto table = ring_coin_field(RingConfig(4, 4, 0.25 * kPi, 0.05 * kPi));
  CHECK(table.alpha == doctest::Approx(0.05 * kPi));
  // exactly two sign changes around the cycle
  int changes = 0;
  for (std::size_t n = 0; n < table.size(); ++n) {
    if ((table.theta[n] > 0) != (table.theta[(n + 1) % table.size()] > 0)) ++changes;
  }
  CHECK(changes == 2);
}

TEST_CASE("free propagation returns after N steps") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {2u, 3u, 8u, 13u}) {
    const CoinField field = CoinField::uniform(n, 0.0, 0.0);
    const WalkerState psi = random_state(n, rng);
    WalkerState cur = psi;
    for (std::size_t t = 0; t < n; ++t) cur = apply_step(cur, field);
    CHECK(max_diff(cur, psi) < 1e-15);
  }
}

TEST_CASE("apply_step rejects mismatched field") {
  const WalkerState psi = WalkerState::localized(4, 0, 0);
  CHECK_THROWS_AS(apply_step(psi, CoinField::uniform(5, 0.1)), DimensionError);
}

TEST_CASE("locality: one site moves to its two neighbours") {
  const RingConfig cfg(5, 4, 0.3 * kPi, 0.02 * kPi);
  const CoinField field = ring_coin_field(cfg);
  for (std::size_t site = 0; site < 9; ++site) {
    const auto out = apply_step(WalkerState::localized(9, site, 1), field);
    for (std::size_t n = 0; n < 9; ++n) {
      const bool neighbour = n == (site + 1) % 9 || n == (site + 8) % 9;
      if (!neighbour) CHECK(out.site_probability(n) == 0.0);
    }
    // L goes to n-1, R goes to n+1
    CHECK(std::norm(out.left((site + 8) % 9)) + std::norm(out.right((site + 1) % 9)) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("step unitary") {
  SUBCASE("N = 2 free walk is a position permutation") {
    const Eigen::MatrixXcd u = build_step_unitary(CoinField::uniform(2, 0.0));
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected(2, 0) = 1.0;  // L at 0 -> L at 1
    expected(3, 1) = 1.0;  // R at 0 -> R at 1
    expected(0, 2) = 1.0;
    expected(1, 3) = 1.0;
    CHECK((u - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(((u * u) - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("unitarity on the symmetric ring") {
    const Eigen::MatrixXcd u = build_step_unitary(ring_coin_field(RingConfig(7, 7, 0.25 * kPi, 0.01 * kPi)));
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(28, 28)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matrix action equals apply_step on a random state") {
    std::mt19937_64 rng(11);
    const CoinField field = ring_coin_field(RingConfig(3, 5, 0.2 * kPi, 0.03 * kPi));
    const WalkerState psi = random_state(8, rng);
    const Eigen::VectorXcd via_matrix = build_step_unitary(field) * psi.amplitudes();
    CHECK((via_matrix - apply_step(psi, field).amplitudes()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("equivalence of step and matrix on a full basis") {
  for (int n1 = 1; n1 <= 8; ++n1) {
    for (int n2 : {1, 3, 8}) {
      const CoinField field = ring_coin_field(RingConfig(n1, n2, 0.35 * kPi, 0.05 * kPi));
      const Eigen::MatrixXcd u = build_step_unitary(field);
      const auto n = static_cast<std::size_t>(n1 + n2);
      for (std::size_t site = 0; site < n; ++site) {
        for (int c = 0; c < 2; ++c) {
          const auto out = apply_step(WalkerState::localized(n, site, c), field);
          const Eigen::Index col = static_cast<Eigen::Index>(2 * site) + c;
          CHECK((out.amplitudes() - u.col(col)).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("norm conservation over 10^4 steps") {
  std::mt19937_64 rng(3);
  const CoinField field = ring_coin_field(RingConfig(6, 9, 0.2 * kPi, 0.04 * kPi));
  WalkerState psi = random_state(15, rng);
  for (int t = 0; t < 10000; ++t) {
    psi = apply_step(psi, field);
    if (t % 997 == 0) CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  }
  CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
}

TEST_CASE("overlap") {
  std::mt19937_64 rng(5);
  const WalkerState a = random_state(6, rng);
  CHECK(std::abs(overlap(a, a) - 1.0) < 1e-14);
  CHECK(std::abs(overlap(WalkerState::localized(6, 1, 0), WalkerState::localized(6, 4, 1))) == 0.0);
  CHECK_THROWS_AS(overlap(a, WalkerState::localized(5, 0, 0)), DimensionError);
}

TEST_CASE("Majorana states are stationary under the step") {
  const RingConfig cfg(7, 7, 0.25 * kPi);
  const CoinField field = ring_coin_field(cfg);
  const auto spec = diagonalize_ring(cfg);
  const auto zero = extract_majorana_pair(spec, MajoranaTarget::Zero, cfg);
  CHECK(max_diff(apply_step(zero.at_origin, field), zero.at_origin) < 1e-10);
  CHECK(max_diff(apply_step(zero.at_interior, field), zero.at_interior) < 1e-10);

  const auto pi = extract_majorana_pair(spec, MajoranaTarget::Pi, cfg);
  const WalkerState stepped = apply_step(pi.at_origin, field);
  CHECK((stepped.amplitudes() + pi.at_origin.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);

  // the two boundary modes are orthogonal
  CHECK(std::abs(overlap(zero.at_origin, zero.at_interior)) < 1e-6);
}

TEST_CASE("canonical phase") {
  Eigen::VectorXcd v(4);
  v << cplx(0.1, 0.2), cplx(0.0, -2.0), cplx(0.3, 0.0), cplx(-0.5, 0.5);
  const auto s = WalkerState(v).with_canonical_phase();
  CHECK(s.amplitudes()[1].imag() == 0.0);
  CHECK(s.amplitudes()[1].real() > 0.0);
  CHECK(std::abs(s.norm() - 1.0) < 1e-15);
}
