#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nvdnp/ensemble.hpp"
#include "nvdnp/optimizer.hpp"
#include "nvdnp/types.hpp"
#include "oracles.hpp"

using namespace nvdnp;

TEST_CASE("grid is symmetric about B0 and spans six linewidths") {
  const PhysicalConstants c;
  const EnsembleConfig cfg = ensemble_for(0.64, c);
  const Eigen::VectorXd g = ensemble_grid(cfg, c);
  REQUIRE(g.size() == 201);
  CHECK(g(100) == c.B0_g);
  CHECK((g(200) - c.B0_g) * c.gamma_e_mhz_per_g == doctest::Approx(6 * 0.64));
  for (int i = 0; i < 201; ++i) CHECK(g(i) - c.B0_g == doctest::Approx(-(g(200 - i) - c.B0_g)));
  const Eigen::VectorXd w = cauchy_weights(g, cfg, c);
  CHECK(w(100) == w.maxCoeff());
  CHECK(w(0) == doctest::Approx(w(200)));
  // Half maximum at +-fwhm/2.
  const double half = 0.5 * 0.64 / c.gamma_e_mhz_per_g;
  const double gb = 0.64 / c.gamma_e_mhz_per_g;
  CHECK(1.0 / (half * half + 0.25 * gb * gb) == doctest::Approx(0.5 * w(100)));
}

TEST_CASE("ensemble configuration is validated") {
  const PhysicalConstants c;
  CHECK_THROWS_AS(ensemble_grid(ensemble_for(0.0, c), c), InvalidInput);
  CHECK_THROWS_AS(ensemble_grid(ensemble_for(0.5, c, 200), c), InvalidInput);
  CHECK_THROWS_AS(ensemble_grid(ensemble_for(0.5, c, 1), c), InvalidInput);
  CHECK_THROWS_AS(ensemble_grid(ensemble_for(0.5, c, 201, -1.0), c), InvalidInput);
}

TEST_CASE("weighted average") {
  const double v[] = {1.0, 2.0, 3.0};
  const double w[] = {1.0, 0.0, 1.0};
  CHECK(ensemble_average(v, w) == 2.0);
  const double zero[] = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(ensemble_average(v, zero), InvalidInput);
  const double neg[] = {1.0, -1.0, 1.0};
  CHECK_THROWS_AS(ensemble_average(v, neg), InvalidInput);
  const double two[] = {1.0, 1.0};
  CHECK_THROWS_AS(ensemble_average(v, two), InvalidInput);
}

TEST_CASE("ensemble of square pulses matches the closed-form grid average") {
  const PhysicalConstants c;
  const double a = std::abs(c.A_par_mhz);
  for (double lw : {0.15, 0.95, 2.0}) {
    const PulsePair pair{square_envelope({1.25, 0.97, -0.2}, 1e-3), square_envelope({1.5, 1.0, -0.3}, 1e-3)};
    const oracle::SquarePair s{1.25, 1.5, -0.2, -0.3, pair.env_m1.duration(), pair.env_p1.duration()};
    const double expected =
        oracle::grid_average([&](double o) { return oracle::square_member(s, o, a); }, lw, 6 * lw, 201);
    const EnsembleResult r = ensemble_dnp(c, ensemble_for(lw, c), pair);
    CHECK(r.average == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("idle ensemble stays at one third") {
  const PhysicalConstants c;
  const EnsembleResult r = ensemble_dnp(c, ensemble_for(0.64, c), {idle_envelope(), idle_envelope()});
  CHECK(r.average == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("limit ensemble approaches the continuous Lorentzian average") {
  const PhysicalConstants c;
  const double a = std::abs(c.A_par_mhz);
  for (double lw : {0.01, 0.32, 0.95, 1.48, 2.0}) {
    const double grid = ensemble_limit(c, ensemble_for(lw, c)).average;
    // Midpoint sampling of the Lorentzian weight on 201 points.
    CHECK(grid == doctest::Approx(oracle::limit_lorentzian(lw, 6 * lw, a)).epsilon(2e-3));
    // Doubling the members moves it by far less than the 0.002 budget.
    CHECK(std::abs(ensemble_limit(c, ensemble_for(lw, c, 401)).average - grid) <= 1e-3);
  }
}

TEST_CASE("weighted average identities") {
  const PhysicalConstants c;
  const EnsembleConfig cfg = ensemble_for(0.43, c, 21);
  const Eigen::VectorXd g = ensemble_grid(cfg, c);
  const double spacing = g(1) - g(0);
  CHECK(spacing * 20 == doctest::Approx(2 * 6 * 0.43 / c.gamma_e_mhz_per_g).epsilon(1e-12));
  const Eigen::VectorXd w = cauchy_weights(g, cfg, c);
  const double gb = 0.43 / c.gamma_e_mhz_per_g;
  CHECK(w(10) == doctest::Approx(4.0 / (gb * gb)).epsilon(1e-14));

  std::vector<double> v(21), ws(w.data(), w.data() + 21), scaled(21);
  for (int i = 0; i < 21; ++i) {
    v[i] = std::cos(0.3 * (i - 10)) * 0.5 + 0.4;  // even in the offset
    scaled[i] = 17.5 * ws[i];
  }
  const double avg = ensemble_average(v, ws);
  CHECK(ensemble_average(v, scaled) == doctest::Approx(avg).epsilon(1e-14));
  CHECK(avg <= *std::max_element(v.begin(), v.end()));
  CHECK(avg >= *std::min_element(v.begin(), v.end()));
  // Even integrand: the half grid (centre counted once) gives the same mean.
  double num = v[10] * ws[10], den = ws[10];
  for (int i = 11; i < 21; ++i) {
    num += 2 * v[i] * ws[i];
    den += 2 * ws[i];
  }
  CHECK(num / den == doctest::Approx(avg).epsilon(1e-13));

  // Indicator of the centre member on a three-point grid.
  const EnsembleConfig three = ensemble_for(1.0, c, 3, 1.0);
  const Eigen::VectorXd w3 = cauchy_weights(ensemble_grid(three, c), three, c);
  const double ind[] = {0.0, 1.0, 0.0};
  CHECK(ensemble_average(ind, {w3.data(), 3}) == doctest::Approx(w3(1) / w3.sum()));
}

TEST_CASE("limit bounds every pulse family") {
  const PhysicalConstants c;
  struct Case {
    PulseFamily family;
    double linewidth;
    std::vector<double> params;
  };
  const Case cases[] = {
      {PulseFamily::Square, 0.64, {1.20, 1.44, -0.10, -0.19, 2.5, 0.1}},
      {PulseFamily::Gaussian, 1.27, {1.93, -0.36}},
      {PulseFamily::Slr, 0.32, {-0.89}},
      {PulseFamily::Slr, 0.43, {-0.89}},
      {PulseFamily::Slr, 2.0, {-0.96}},
  };
  for (const Case& k : cases) {
    OptimizationProblem p;
    p.family = k.family;
    p.linewidth = k.linewidth;
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(k.params.data(), static_cast<Eigen::Index>(k.params.size()));
    CHECK(objective(p, x) <= ensemble_limit(c, ensemble_for(k.linewidth, c)).average + 0.005);
  }
}
