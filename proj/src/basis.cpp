#include "ulrm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <utility>

#include "ulrm/error.hpp"
#include "parallel.hpp"

namespace ulrm {

int BasisSet::n_max() const {
  int m = 0;
  for (const auto& s : states) m = std::max(m, s.n);
  return m;
}

std::size_t BasisSet::index_of(int n, int l) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].n == n && states[i].l == l) return i;
  }
  throw UsageError("state n=" + std::to_string(n) + " l=" + std::to_string(l) + " not in basis");
}

BasisSet single_state_basis(const SpeciesData& species, int n, int l) {
  BasisSet b;
  b.species = species.name;
  b.kind = BasisKind::SingleState;
  b.states.push_back(make_state(species, n, l));
  return b;
}

BasisSet degenerate_manifold_basis(const SpeciesData& species, int n, int l_min) {
  if (l_min < 0 || l_min >= n) throw InvalidStateError("manifold needs 0 <= l_min < n");
  BasisSet b;
  b.species = species.name;
  b.kind = BasisKind::DegenerateManifold;
  for (int l = l_min; l < n; ++l) b.states.push_back(make_state(species, n, l));
  b.target = b.states.size() - 1;
  return b;
}

BasisSet extended_basis(const SpeciesData& species, int n, int l) {
  const double ns = n - quantum_defect(species, n, l);
  int lo = static_cast<int>(std::floor(ns));
  int hi = static_cast<int>(std::ceil(ns));
  if (lo == hi) --lo;
  if (lo < 5) throw InvalidStateError("extended basis needs n* > 5");

  BasisSet b;
  b.species = species.name;
  b.kind = BasisKind::ExtendedPWave;
  for (int N : {hi, lo}) {
    for (int L = 3; L < N; ++L) b.states.push_back(make_state(species, N, L));
  }
  for (int L = 0; L <= 2; ++L) {
    for (int N = std::max(lo, L + 1); N < hi + 6; ++N) {
      if (N < 5) continue;
      const double s = N - quantum_defect(species, N, L);
      if (s >= lo - 1e-9 && s <= hi + 1e-9) b.states.push_back(make_state(species, N, L));
    }
  }
  b.target = b.index_of(n, l);
  return b;
}

PreparedBasis prepare_basis(BasisSet basis, int radial_points) {
  const GridSpec grid = GridSpec::for_n(basis.n_max(), radial_points);
  return prepare_basis(std::move(basis), grid);
}

PreparedBasis prepare_basis(BasisSet basis, const GridSpec& grid) {
  std::set<std::pair<int, int>> seen;
  for (const auto& s : basis.states) {
    if (s.species != basis.species) throw UsageError("basis mixes species");
    if (!seen.insert({s.n, s.l}).second) {
      throw UsageError("duplicate basis state n=" + std::to_string(s.n) + " l=" + std::to_string(s.l));
    }
  }
  std::vector<std::optional<RadialWavefunction>> solved(basis.size());
  detail::parallel_for(basis.size(), [&](std::size_t i) { solved[i].emplace(solve_radial(basis.states[i], grid)); });
  PreparedBasis out{std::move(basis), grid, {}};
  out.wavefunctions.reserve(solved.size());
  for (auto& w : solved) out.wavefunctions.push_back(std::move(*w));
  return out;
}

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::SingleState: return "single-state";
    case BasisKind::DegenerateManifold: return "degenerate-manifold";
    case BasisKind::ExtendedPWave: return "extended-p-wave";
  }
  return "single-state";
}

}  // namespace ulrm
