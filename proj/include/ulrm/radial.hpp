#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ulrm/species.hpp"

namespace ulrm {

struct RydbergState {
  std::string species;
  int n = 0;
  int l = 0;
  double energy = 0.0;  // hartree
};

/// E = -1 / (2 (n - δ_l)^2). Requires n >= 5 and 0 <= l < n.
double rydberg_energy(const SpeciesData& species, int n, int l);
RydbergState make_state(const SpeciesData& species, int n, int l);

/// Log grid x = ln r with fixed step, anchored at r_max. Two wavefunctions built
/// from the same GridSpec share their outer samples exactly (top-aligned), so
/// overlap integrals need no interpolation.
struct GridSpec {
  double r_max = 0.0;
  double log_step = 0.0;

  /// r_max = rmax_factor * n^2 and a step giving `points` samples over [0.05, r_max].
  static GridSpec for_n(int n_max, int points = 4000, double rmax_factor = 3.0);
};

class RadialWavefunction {
 public:
  RadialWavefunction(RydbergState state, std::vector<double> r, std::vector<double> u,
                     double log_step, double norm_error);

  const RydbergState& state() const { return state_; }
  const std::vector<double>& r_grid() const { return r_; }
  const std::vector<double>& u() const { return u_; }
  double log_step() const { return log_step_; }
  double norm_error() const { return norm_error_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }

  /// Cubic-spline value and derivative; RangeError outside [r_min, r_max].
  double evaluate_u(double r) const;
  double evaluate_du(double r) const;

  /// Like evaluate_u/du, but 0 below r_min where the inner (truncated) region
  /// was discarded. Still throws above r_max.
  double sample_u(double r) const;
  double sample_du(double r) const;

 private:
  struct Spline;
  RydbergState state_;
  std::vector<double> r_;
  std::vector<double> u_;
  double log_step_;
  double norm_error_;
  std::shared_ptr<const Spline> spline_;
};

/// Numerov inward integration of u'' = [l(l+1)/r^2 - 2/r - 2E] u (E < 0) on the
/// log grid, WKB-seeded at r_max, truncated at r_min = max(0.05, r_inner / 2).
/// The tail sign is positive. Throws IntegrationError if r_max does not lie
/// beyond the outer turning point, AccuracyError if a hydrogenic (δ = 0)
/// solution has the wrong node count.
RadialWavefunction solve_radial(const RydbergState& state, const GridSpec& grid);

/// Inner radius where integration stops for this state.
double radial_cutoff(const RydbergState& state);

/// Number of sign changes of u, ignoring samples below `rel_floor * max|u|`.
int count_nodes(const std::vector<double>& u, double rel_floor = 1e-8);

/// ∫ u_a u_b r^p dr over the common (top-aligned) part of two grids built
/// from the same GridSpec. UsageError if the grids are not aligned.
double radial_integral(const RadialWavefunction& a, const RadialWavefunction& b, int power = 0);

}  // namespace ulrm
