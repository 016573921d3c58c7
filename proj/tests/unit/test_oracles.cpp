#include "bcsgp/oracles/oracles.hpp"
#include <Eigen/Dense>
#include <cmath>
#include <doctest.h>
#include <fstream>
#include <numbers>

using namespace bcsgp::oracles;
constexpr double pi = std::numbers::pi;

TEST_CASE("oracle: Gaussian quartic closed form against 4-D quadrature") {
  GaussianCase c;
  c.a = 1.0;
  c.b = 0.5;
  c.h = 0.4;
  c.E0 = 0.5;
  c.D = 1.6;
  c = c.normalized();
  const auto closed = GaussianOracle::quartic(c);
  const auto quad = gaussian_quartic_by_quadrature(c, 41);
  CHECK(std::abs(quad.plain / closed.plain - 1.0) < 1e-8);
  CHECK(std::abs(quad.kinetic / closed.kinetic - 1.0) < 1e-8);
  CHECK(std::abs(quad.trap / closed.trap - 1.0) < 1e-8);
  CHECK(std::abs(quad.hbar / closed.hbar - 1.0) < 1e-8);
}

TEST_CASE("oracle: Mehler spectrum against a discretized kernel") {
  const double c1 = 1.3, c2 = 0.7;
  const auto ms = mehler_spectrum(c1, c2);
  const int n = 600;
  const double L = 8.0, dx = 2 * L / n;
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -L + (i + 0.5) * dx, y = -L + (j + 0.5) * dx;
      K(i, j) = std::exp(-c1 * (x * x + y * y) + 2 * c2 * x * y) * dx;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  const auto ev = es.eigenvalues();
  CHECK(std::abs(ev(n - 1) / ms.lambda0 - 1.0) < 1e-10);
  CHECK(std::abs(ev(n - 2) / ev(n - 1) - ms.rho) < 1e-10);
}

TEST_CASE("oracle: g_BCS Gaussian value and harmonic oscillator") {
  const double B = std::pow(pi, -0.75);
  CHECK(std::abs(GaussianOracle::g_bcs(B, 0.5, 0.5) -
                 8.0 * std::pow(pi / 2, 1.5) * 1.25) < 1e-12);
  CHECK(GaussianOracle::g_bcs(B, 0.5, 0.5) == doctest::Approx(19.6869).epsilon(1e-5));
  const auto ho = harmonic_oracle(0.25, 1.0);
  CHECK(ho.energy == doctest::Approx(1.5));
  CHECK(ho.gamma == doctest::Approx(1.0));
}

TEST_CASE("oracle: square well threshold and state normalization") {
  CHECK_FALSE(square_well_oracle(2.4, 1.0).has_value());
  REQUIRE(square_well_oracle(2.6, 1.0).has_value());
  const double E0 = *square_well_oracle(4.0, 1.0);
  const double k = std::sqrt(4.0 - E0);
  CHECK(std::abs(k / std::tan(k) + std::sqrt(E0)) < 1e-10);
  double s = 0.0;
  const double dr = 1e-4;
  for (double r = 0.5 * dr; r < 40.0; r += dr)
    s += 4 * pi * r * r * std::pow(square_well_state(4.0, 1.0, E0, r), 2) * dr;
  CHECK(std::abs(s - 1.0) < 1e-7);
}

TEST_CASE("oracle: square well deep-well limit") {
  // V0 - E0 behaves like pi^2 / R^2, so 1e-3 needs R near 100.
  const double V0 = 4.0;
  const double e50 = V0 - *square_well_oracle(V0, 50.0);
  CHECK(e50 > 0.0);
  CHECK(e50 <= pi * pi / (50.0 * 50.0));
  CHECK(V0 - *square_well_oracle(V0, 100.0) <= 1e-3);
}

TEST_CASE("oracle: frozen table matches the library") {
  std::ifstream in(BCSGP_ORACLE_TABLE);
  REQUIRE(in.good());
  const auto frozen = nlohmann::json::parse(in);
  const auto live = oracle_table_json();
  REQUIRE(frozen.at("version") == k_oracle_table_version);
  REQUIRE(frozen.at("cases").size() == live.at("cases").size());
  for (std::size_t i = 0; i < live.at("cases").size(); ++i) {
    const auto &f = frozen["cases"][i];
    const auto &l = live["cases"][i];
    CHECK(f.at("name") == l.at("name"));
    const double fe = f.at("expected"), le = l.at("expected");
    CHECK(std::abs(fe - le) <= 1e-12 * std::max(1.0, std::abs(fe)));
  }
}

TEST_CASE("Gaussian quartic kinetic trace tends to h g_BCS ||psi||_4^4") {
  GaussianCase c;
  c.h = 1e-4;
  c = c.normalized();
  const auto q = GaussianOracle::quartic(c);
  const double lead = q.kinetic / (c.h * GaussianOracle::l4_norm4(c.A, c.a));
  CHECK(std::abs(lead / GaussianOracle::g_bcs(c.B, c.b, c.E0) - 1.0) < 1e-6);
}
