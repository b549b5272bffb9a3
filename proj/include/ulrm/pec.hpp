#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ulrm/basis.hpp"
#include "ulrm/scattering.hpp"

namespace ulrm {

/// Which zero the curve energies are measured from.
enum class ReferenceKind {
  TargetState,     // isolated Rydberg line of the basis target
  HydrogenicLine,  // -1/(2 n^2) for the target's n
};

struct HamiltonianAtR {
  Eigen::MatrixXd H;  // hartree, relative to the reference energy
  bool reliable = true;
  ScatteringEvaluation scattering;
};

/// Contact-interaction Hamiltonian at internuclear distance R:
///   H_ij = (E_i - E_ref) δ_ij + 2π a_s ψ_i ψ_j − 6π a_p^3 g_i g_j
/// with ψ_i = (u_i/R) Y_{l_i 0}(0) and g_i = ∂_r(u_i/r)|_R Y_{l_i 0}(0); the
/// angular part of ∇ψ vanishes on the axis for m = 0. k(R) uses `k_energy`.
HamiltonianAtR build_hamiltonian(const PreparedBasis& basis, const SpeciesData& perturber, double R,
                                 bool include_p_wave, double reference_energy, double k_energy,
                                 double threshold = kDefaultDivergenceThreshold);

/// Same, with the target state's energy for k and as the reference.
HamiltonianAtR build_hamiltonian(const PreparedBasis& basis, const SpeciesData& perturber, double R,
                                 bool include_p_wave);

/// ψ_i(R) and the on-axis radial gradient g_i(R) for every basis member.
Eigen::VectorXd contact_amplitudes(const PreparedBasis& basis, double R);
Eigen::VectorXd contact_gradients(const PreparedBasis& basis, double R);

enum class TrackingMode { AllCurves, TargetOnly };

struct PecOptions {
  bool include_p_wave = false;
  ReferenceKind reference = ReferenceKind::TargetState;
  TrackingMode tracking = TrackingMode::AllCurves;
  double divergence_threshold = kDefaultDivergenceThreshold;
};

struct PotentialCurveSet {
  std::string rydberg_species;
  std::string perturber_species;
  BasisSet basis;
  bool include_p_wave = false;
  std::vector<double> R;
  /// curves[c][i]: energy of tracked curve c at R[i], hartree relative to reference_energy.
  std::vector<std::vector<double>> curves;
  /// eigvecs[c][i]: unit coefficient vector, largest-|c| component positive.
  std::vector<std::vector<Eigen::VectorXd>> eigvecs;
  /// adiabatic_index[c][i]: energy rank of curve c at R[i].
  std::vector<std::vector<int>> adiabatic_index;
  std::vector<bool> reliable;
  double reference_energy = 0.0;
  std::string reference_label;
  std::size_t target_curve = 0;

  std::size_t size() const { return curves.size(); }
};

/// Diagonalizes at every R and connects eigenvectors across R by maximal overlap,
/// starting from the largest R. Degenerate eigenspaces are rotated onto the
/// previous step before matching. Throws EigenSolverError with the grid index
/// on failure. With TrackingMode::TargetOnly only the target curve is kept.
PotentialCurveSet pec_diagonalize(const PreparedBasis& basis, const SpeciesData& perturber,
                                  const std::vector<double>& R_grid, const PecOptions& options = {});

/// First-order s-wave curve of an isolated state: 2π a_s(k(R)) |ψ(R)|².
PotentialCurveSet pec_low_l_swave(const RadialWavefunction& state, const SpeciesData& perturber,
                                  const std::vector<double>& R_grid);

/// Coefficients ⟨j|2π a_s δ|target⟩ / (E_target − E_j) for each `others[j]`.
/// Throws DegeneracyError if any |E_target − E_j| < degeneracy_threshold.
std::vector<double> first_order_mixing(const RadialWavefunction& state, const SpeciesData& perturber,
                                       double R, const std::vector<RadialWavefunction>& others,
                                       double degeneracy_threshold = 1e-10);

struct WellDescriptor {
  int index = 0;  // 1 = outermost
  double R_min = 0.0;
  double R_left = 0.0;
  double R_right = 0.0;
  double depth = 0.0;      // V(R_min) − asymptote, hartree
  double V_min = 0.0;      // V(R_min)
  double barrier = 0.0;    // min(V(R_left), V(R_right))
};

struct WellSearch {
  double depth_floor = 0.1 / 6.5796839207e9;  // 0.1 MHz in hartree
  double asymptote = 0.0;
  std::optional<double> R_lo;
  std::optional<double> R_hi;
};

/// Local minima whose prominence exceeds the depth floor. Boundaries are the
/// barrier maxima between retained minima; the outermost well extends to the
/// grid end. Returned outermost first.
std::vector<WellDescriptor> find_wells(const std::vector<double>& R, const std::vector<double>& V,
                                       const WellSearch& search = {});

/// ⟨i|z|j⟩ in atomic units over the basis (radial ∫u_i u_j r dr times the
/// m = 0 angular factor).
Eigen::MatrixXd dipole_matrix(const PreparedBasis& basis);

/// d = Σ c_i c_j ⟨i|z|j⟩ in Debye. `eigvec` must be normalized.
double dipole_moment(const PreparedBasis& basis, const Eigen::VectorXd& eigvec);
double dipole_moment(const Eigen::MatrixXd& z_matrix, const Eigen::VectorXd& eigvec);

/// Nearest grid index to R.
std::size_t nearest_index(const std::vector<double>& grid, double R);

/// Uniform grid of `points` samples over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t points);

const char* to_string(ReferenceKind kind);

}  // namespace ulrm
