#include "ulrm/density.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

ElectronDensityMap electron_density(const PreparedBasis& basis, const Eigen::VectorXd& eigvec, double R,
                                    const DensityGrid& grid) {
  if (eigvec.size() != static_cast<Eigen::Index>(basis.size())) {
    throw UsageError("eigvec dimension does not match basis");
  }
  ElectronDensityMap map;
  map.rho_grid = grid.rho;
  map.z_grid = grid.z;
  map.R = R;
  const std::size_t nr = grid.rho.size(), nz = grid.z.size();
  map.density.assign(nr * nz, 0.0);

  int lmax = 0;
  double r_top = 0.0;
  for (const auto& wf : basis.wavefunctions) {
    lmax = std::max(lmax, wf.state().l);
    r_top = std::max(r_top, wf.r_max());
  }
  std::vector<std::size_t> uncovered(nr, 0);

  detail::parallel_for(nr, [&](std::size_t a) {
    const double rho = grid.rho[a];
    for (std::size_t b = 0; b < nz; ++b) {
      const double z = grid.z[b];
      const double r = std::hypot(rho, z);
      if (r <= 0.0) continue;
      if (r > r_top) {
        ++uncovered[a];
        continue;
      }
      const double ct = z / r;
      double psi = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const double c = eigvec[static_cast<Eigen::Index>(i)];
        if (c == 0.0) continue;
        const auto& wf = basis.wavefunctions[i];
        if (r > wf.r_max()) continue;
        const int l = wf.state().l;
        psi += c * wf.sample_u(r) / r * std::sqrt((2.0 * l + 1.0) / (4.0 * units::kPi)) *
               std::legendre(static_cast<unsigned>(l), ct);
      }
      map.density[a * nz + b] = rho * psi * psi;
    }
  });
  for (auto u : uncovered) map.uncovered += u;
  return map;
}

int lobe_count(const ElectronDensityMap& map, double rel_floor) {
  std::size_t col = map.rho_grid.size();
  for (std::size_t a = 0; a < map.rho_grid.size(); ++a) {
    if (map.rho_grid[a] > 0.0 && (col == map.rho_grid.size() || map.rho_grid[a] < map.rho_grid[col])) col = a;
  }
  if (col == map.rho_grid.size()) throw ResolutionError("density map has no rho > 0 column");

  std::vector<double> ridge;
  for (std::size_t b = 0; b < map.z_grid.size(); ++b) {
    if (map.z_grid[b] > 0.0) ridge.push_back(map.at(col, b) / map.rho_grid[col]);
  }
  if (ridge.size() < 3) throw ResolutionError("density map has no z > 0 samples");
  const auto peak = static_cast<std::size_t>(std::max_element(ridge.begin(), ridge.end()) - ridge.begin());
  const double mx = ridge[peak];
  if (!(mx > 0.0)) throw ResolutionError("density map is identically zero on the axis");
  int maxima = 1;
  for (std::size_t i = peak + 1; i + 1 < ridge.size(); ++i) {
    if (ridge[i] > ridge[i - 1] && ridge[i] >= ridge[i + 1] && ridge[i] > rel_floor * mx) ++maxima;
  }
  return 2 * maxima;
}

}  // namespace ulrm
