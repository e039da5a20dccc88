#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nehari/theta.hpp"

using namespace nehari;
using std::numbers::pi;

TEST_CASE("integer exponent is integrated exactly") {
  // (1/2pi) \int (2 + 2cos t)^2 dt = 4 + 2 = 6, a trig polynomial
  CHECK(std::abs(theta_avg_power(1.0, 1.0, 3.0, 64) - 6.0) < 1e-12);
  auto f = theta_avg_force(1.0, 1.0, 3.0, 64);
  CHECK(std::abs(f.first - 3.0) < 1e-12);
  CHECK(std::abs(f.second - 3.0) < 1e-12);
}

TEST_CASE("half-integer exponent at the degenerate point") {
  // (1/2pi) \int (2 + 2cos t)^{3/2} dt = 32/(3 pi)
  CHECK(std::abs(theta_avg_power(1.0, 1.0, 2.0) - 32.0 / (3.0 * pi)) < 1e-10);
}

TEST_CASE("one vanishing component reduces to the plain power") {
  for (double a : {0.3, -1.7, 2.0}) {
    for (double p : {1.5, 2.0, 2.5, 3.0}) {
      CHECK(theta_avg_power(a, 0.0, p) == std::pow(a * a, 0.5 * (p + 1.0)));
      auto f = theta_avg_force(a, 0.0, p);
      CHECK(f.first == std::pow(a * a, 0.5 * (p - 1.0)) * a);
      CHECK(f.second == 0.0);
      auto g = theta_avg_force(0.0, a, p);
      CHECK(g.first == 0.0);
      CHECK(g.second == std::pow(a * a, 0.5 * (p - 1.0)) * a);
    }
  }
}

TEST_CASE("symmetry in the two components") {
  auto e1 = theta_eval(0.8, 0.3, 2.5);
  auto e2 = theta_eval(0.3, 0.8, 2.5);
  CHECK(e1.power == Catch::Approx(e2.power).epsilon(1e-14));
  CHECK(e1.force_a == Catch::Approx(e2.force_b).epsilon(1e-14));
  CHECK(e1.force_b == Catch::Approx(e2.force_a).epsilon(1e-14));
}

TEST_CASE("finite differences confirm the force is the derivative") {
  std::mt19937_64 rng(11);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 40; ++trial) {
    const double a = uniform(-2.0, 2.0);
    const double b = uniform(-2.0, 2.0);
    const double p = uniform(1.1, 3.0);
    if (std::abs(a) < 0.05 || std::abs(b) < 0.05) continue;
    if (std::abs(std::abs(a) - std::abs(b)) < 0.05) continue;
    const double eps = 1e-5 * std::max(1.0, std::abs(a));
    const double fd =
        (theta_avg_power(a + eps, b, p) - theta_avg_power(a - eps, b, p)) / (2.0 * eps);
    const double an = (p + 1.0) * theta_avg_force(a, b, p).first;
    CAPTURE(a, b, p);
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("upper bounds by the collinear configuration") {
  std::mt19937_64 rng(23);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 60; ++trial) {
    const double a = uniform(0.0, 3.0);
    const double b = uniform(0.0, 3.0);
    const double p = uniform(1.1, 3.0);
    const double val = theta_avg_power(a, b, p);
    const double coll = std::pow(a + b, p + 1.0);
    const double split = std::pow(2.0, p) * (std::pow(a, p + 1.0) + std::pow(b, p + 1.0));
    CHECK(val <= coll * (1.0 + 1e-12) + 1e-14);
    CHECK(coll <= split * (1.0 + 1e-12) + 1e-14);
  }
}

TEST_CASE("coupling factor exceeds one strictly inside the share range") {
  for (double p : {1.5, 2.0, 2.5}) {
    for (double s : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      CAPTURE(p, s);
      CHECK(jensen_factor(s, p) > 1.0);
    }
  }
  // endpoint limits
  CHECK(std::abs(jensen_factor(0.0, 2.0) - 1.0) == 0.0);
  CHECK(std::abs(jensen_factor(1e-8, 2.0) - 1.0) < 1e-6);
  // closed form at the symmetric point for the cubic case:
  // (1/2pi) \int (1 + cos t)^2 dt = 3/2
  CHECK(std::abs(jensen_factor(0.5, 3.0, 64) - 1.5) < 1e-12);
}

TEST_CASE("near-degenerate refinement is stable") {
  const double v1 = theta_avg_power(1.0, 0.999, 1.5);
  const double v2 = theta_avg_power(1.0, 0.999, 1.5, 4096);
  CHECK(std::abs(v1 - v2) < 1e-9 * std::max(1.0, std::abs(v2)));
}

TEST_CASE("invalid input is rejected") {
  CHECK_THROWS_AS(theta_avg_power(1.0, 1.0, 1.0), config_error);
  CHECK_THROWS_AS(theta_avg_power(1.0, 1.0, 5.5), config_error);
  CHECK_THROWS_AS(theta_avg_power(1.0, 1.0, 2.0, 7), config_error);
  CHECK_THROWS_AS(jensen_factor(-0.1, 2.0), config_error);
  CHECK_THROWS_AS(jensen_factor(1.1, 2.0), config_error);
}
