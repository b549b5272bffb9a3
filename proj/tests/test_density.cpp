#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ulrm/density.hpp"
#include "ulrm/error.hpp"
#include "ulrm/pec.hpp"

using namespace ulrm;

TEST_CASE("trilobite density is non-negative and peaks at the perturber") {
  const auto& h = species_lookup("H");
  const auto pb = prepare_basis(degenerate_manifold_basis(h, 20, 0));
  const double R = 700.0;
  Eigen::VectorXd c = contact_amplitudes(pb, R);
  c.normalize();
  DensityGrid g;
  g.rho = linspace(0.0, 800.0, 81);
  g.z = linspace(-800.0, 800.0, 1601);
  const auto map = electron_density(pb, c, R, g);
  CHECK(map.uncovered == 0);
  CHECK(std::all_of(map.density.begin(), map.density.end(), [](double v) { return v >= 0.0; }));
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.z.size(); ++k) {
    if (map.at(1, k) > map.at(1, best)) best = k;
  }
  CHECK(std::abs(g.z[best] - R) < 0.1 * R);
  for (std::size_t k = 0; k < g.z.size(); ++k) CHECK(map.at(0, k) == 0.0);
}

TEST_CASE("lobe count needs a usable ridge") {
  ElectronDensityMap m;
  m.rho_grid = {0.0};
  m.z_grid = {-1.0, 0.0, 1.0};
  m.density = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(lobe_count(m), ResolutionError);
  m.rho_grid = {0.0, 1.0};
  m.z_grid = {-1.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  m.density.assign(14, 0.0);
  CHECK_THROWS_AS(lobe_count(m), ResolutionError);
  const double ridge[] = {0.1, 0.2, 1.0, 0.3, 0.5, 0.2, 0.1};
  for (int k = 0; k < 7; ++k) m.density[7 + k] = ridge[k];
  CHECK(lobe_count(m) == 4);
}
