#pragma once

#include <string>
#include <vector>

#include "ulrm/radial.hpp"

namespace ulrm {

enum class BasisKind { SingleState, DegenerateManifold, ExtendedPWave };

/// Ordered m = 0 states of one species. `target` indexes the state whose
/// energy sets k(R) and whose adiabatic curve is followed by default.
struct BasisSet {
  std::string species;
  BasisKind kind = BasisKind::SingleState;
  std::vector<RydbergState> states;
  std::size_t target = 0;

  std::size_t size() const { return states.size(); }
  int n_max() const;
  /// Index of (n, l) in states; throws UsageError if absent.
  std::size_t index_of(int n, int l) const;
};

BasisSet single_state_basis(const SpeciesData& species, int n, int l);

/// States (n, l) for l_min <= l < n. The target is the highest-l member.
BasisSet degenerate_manifold_basis(const SpeciesData& species, int n, int l_min = 3);

/// Energy window between the hydrogenic manifolds floor(n*) and ceil(n*) of
/// the target (n, l): every l >= 3 state of both manifolds plus every l <= 2
/// state whose effective quantum number lies inside the window.
/// For Rb 35S this is {32(l>2), 35S, 34P, 33D, 31(l>2)}.
BasisSet extended_basis(const SpeciesData& species, int n, int l);

/// Basis with radial wavefunctions solved on one shared grid.
struct PreparedBasis {
  BasisSet basis;
  GridSpec grid;
  std::vector<RadialWavefunction> wavefunctions;

  std::size_t size() const { return basis.size(); }
};

/// Solves every member on GridSpec::for_n(n_max) unless a grid is given.
PreparedBasis prepare_basis(BasisSet basis, int radial_points = 4000);
PreparedBasis prepare_basis(BasisSet basis, const GridSpec& grid);

const char* to_string(BasisKind kind);

}  // namespace ulrm
