#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ulrm/basis.hpp"

namespace ulrm {

struct DensityGrid {
  std::vector<double> rho;  // >= 0
  std::vector<double> z;
};

/// ρ|ψ(ρ, z)|² on a cylindrical grid with the perturber at (0, R). For m = 0
/// states the φ = 0 and φ = π half-planes carry identical values, so one
/// array serves both.
struct ElectronDensityMap {
  std::vector<double> rho_grid;
  std::vector<double> z_grid;
  std::vector<double> density;  // row-major [i_rho * z_grid.size() + i_z]
  double R = 0.0;
  std::size_t uncovered = 0;  // samples with r beyond the radial grids (set to 0)

  double at(std::size_t i_rho, std::size_t i_z) const { return density[i_rho * z_grid.size() + i_z]; }
};

/// ψ(ρ, z) = Σ c_i u_i(r)/r Y_{l_i 0}(θ).
ElectronDensityMap electron_density(const PreparedBasis& basis, const Eigen::VectorXd& eigvec, double R,
                                    const DensityGrid& grid);

/// Number of lobes of a trilobite-like density. Along the near-axis ridge (the
/// smallest ρ > 0 column) the global maximum sits at the perturber; it and every
/// further maximum outward count once, doubled for the mirror half-plane.
/// Throws ResolutionError if the ridge is empty or zero.
int lobe_count(const ElectronDensityMap& map, double rel_floor = 1e-4);

}  // namespace ulrm
