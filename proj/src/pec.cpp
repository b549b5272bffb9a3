#include "ulrm/pec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

constexpr std::size_t kBlock = 64;

double angular_factor(int l) { return std::sqrt((2.0 * l + 1.0) / (4.0 * units::kPi)); }

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  bool reliable = true;
};

Eigenpairs diagonalize(const PreparedBasis& basis, const SpeciesData& perturber, double R,
                       const PecOptions& opt, double ref, double k_energy, std::size_t grid_index) {
  auto h = build_hamiltonian(basis, perturber, R, opt.include_p_wave, ref, k_energy,
                             opt.divergence_threshold);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.H);
  if (es.info() != Eigen::Success) throw EigenSolverError("eigensolver did not converge", grid_index);
  return {es.eigenvalues(), es.eigenvectors(), h.reliable};
}

// Clusters of (numerically) equal eigenvalues as [begin, end) ranges.
std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const Eigen::VectorXd& w) {
  const double scale = w.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale + std::numeric_limits<double>::min();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index b = 0;
  for (Eigen::Index i = 1; i <= w.size(); ++i) {
    if (i == w.size() || w[i] - w[i - 1] > tol) {
      out.emplace_back(b, i);
      b = i;
    }
  }
  return out;
}

// Rotates each degenerate block of `vecs` so it best matches the previous
// step's tracked vectors (orthogonal Procrustes on the block).
void align_degenerate(Eigenpairs& ep, const Eigen::MatrixXd& prev) {
  for (auto [b, e] : clusters(ep.values)) {
    const Eigen::Index m = e - b;
    if (m < 2) continue;
    Eigen::MatrixXd Q = ep.vectors.middleCols(b, m);
    Eigen::MatrixXd M = Q.transpose() * prev;
    std::vector<Eigen::Index> cols(static_cast<std::size_t>(M.cols()));
    std::iota(cols.begin(), cols.end(), Eigen::Index{0});
    std::partial_sort(cols.begin(), cols.begin() + m, cols.end(), [&](Eigen::Index x, Eigen::Index y) {
      return M.col(x).squaredNorm() > M.col(y).squaredNorm();
    });
    Eigen::MatrixXd Ms(m, m);
    for (Eigen::Index c = 0; c < m; ++c) Ms.col(c) = M.col(cols[static_cast<std::size_t>(c)]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ms, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ep.vectors.middleCols(b, m) = Q * svd.matrixU() * svd.matrixV().transpose();
  }
}

// Vector in the eigenspace of eigenvalue j closest to `c` (projection for a
// degenerate block, the eigenvector itself otherwise).
Eigen::VectorXd closest_in_eigenspace(const Eigenpairs& ep, Eigen::Index j, const Eigen::VectorXd& c) {
  for (auto [b, e] : clusters(ep.values)) {
    if (j < b || j >= e) continue;
    if (e - b == 1) break;
    Eigen::MatrixXd Q = ep.vectors.middleCols(b, e - b);
    Eigen::VectorXd v = Q * (Q.transpose() * c);
    const double nv = v.norm();
    if (nv > 1e-12) return v / nv;
    break;
  }
  return ep.vectors.col(j);
}

}  // namespace

Eigen::VectorXd contact_amplitudes(const PreparedBasis& basis, double R) {
  Eigen::VectorXd psi(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& wf = basis.wavefunctions[i];
    psi[static_cast<Eigen::Index>(i)] = wf.sample_u(R) / R * angular_factor(wf.state().l);
  }
  return psi;
}

Eigen::VectorXd contact_gradients(const PreparedBasis& basis, double R) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& wf = basis.wavefunctions[i];
    const double u = wf.sample_u(R), du = wf.sample_du(R);
    g[static_cast<Eigen::Index>(i)] = (du / R - u / (R * R)) * angular_factor(wf.state().l);
  }
  return g;
}

HamiltonianAtR build_hamiltonian(const PreparedBasis& basis, const SpeciesData& perturber, double R,
                                 bool include_p_wave, double reference_energy, double k_energy,
                                 double threshold) {
  const auto nb = static_cast<Eigen::Index>(basis.size());
  HamiltonianAtR out;
  out.scattering = evaluate_scattering(perturber, k_energy, R, threshold);
  out.H = Eigen::MatrixXd::Zero(nb, nb);

  const Eigen::VectorXd psi = contact_amplitudes(basis, R);
  const double cs = 2.0 * units::kPi * out.scattering.a_s;
  Eigen::VectorXd grad;
  double cp = 0.0;
  if (include_p_wave) {
    out.reliable = out.scattering.reliable;
    if (std::isfinite(out.scattering.a_p3)) {
      grad = contact_gradients(basis, R);
      cp = -6.0 * units::kPi * out.scattering.a_p3;
    }
  }
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double v = cs * psi[i] * psi[j];
      if (cp != 0.0) v += cp * grad[i] * grad[j];
      out.H(i, j) = v;
      out.H(j, i) = v;
    }
    out.H(i, i) += basis.basis.states[static_cast<std::size_t>(i)].energy - reference_energy;
  }
  return out;
}

HamiltonianAtR build_hamiltonian(const PreparedBasis& basis, const SpeciesData& perturber, double R,
                                 bool include_p_wave) {
  const double e = basis.basis.states[basis.basis.target].energy;
  return build_hamiltonian(basis, perturber, R, include_p_wave, e, e);
}

PotentialCurveSet pec_diagonalize(const PreparedBasis& basis, const SpeciesData& perturber,
                                  const std::vector<double>& R_grid, const PecOptions& options) {
  if (R_grid.size() < 2) throw UsageError("R grid needs at least 2 points");
  for (std::size_t i = 1; i < R_grid.size(); ++i) {
    if (!(R_grid[i] > R_grid[i - 1])) throw UsageError("R grid must be strictly increasing");
  }
  if (!(R_grid.front() > 0.0)) throw UsageError("R grid must be positive");

  const auto& target_state = basis.basis.states[basis.basis.target];
  PecOptions opt = options;
  if (basis.basis.kind == BasisKind::DegenerateManifold) opt.tracking = TrackingMode::AllCurves;

  PotentialCurveSet out;
  out.rydberg_species = basis.basis.species;
  out.perturber_species = perturber.name;
  out.basis = basis.basis;
  out.include_p_wave = opt.include_p_wave;
  out.R = R_grid;
  if (opt.reference == ReferenceKind::TargetState) {
    out.reference_energy = target_state.energy;
    out.reference_label = "isolated " + target_state.species + " n=" + std::to_string(target_state.n) +
                          " l=" + std::to_string(target_state.l) + " line";
  } else {
    out.reference_energy = -0.5 / (static_cast<double>(target_state.n) * target_state.n);
    out.reference_label = "hydrogenic n=" + std::to_string(target_state.n) + " line";
  }
  const double k_energy = target_state.energy;

  const std::size_t nR = R_grid.size();
  const auto nb = static_cast<Eigen::Index>(basis.size());
  const bool all = opt.tracking == TrackingMode::AllCurves;
  const std::size_t nc = all ? basis.size() : 1;
  out.curves.assign(nc, std::vector<double>(nR));
  out.eigvecs.assign(nc, std::vector<Eigen::VectorXd>(nR));
  out.adiabatic_index.assign(nc, std::vector<int>(nR));
  out.reliable.assign(nR, true);

  Eigen::MatrixXd prev;  // tracked vectors with continuity signs, one column per curve
  std::vector<double> prev_energy(nc);

  std::vector<Eigenpairs> block;
  for (std::size_t top = nR; top > 0;) {
    const std::size_t bottom = top > kBlock ? top - kBlock : 0;
    block.assign(top - bottom, {});
    detail::parallel_for(top - bottom, [&](std::size_t k) {
      const std::size_t i = bottom + k;
      block[k] = diagonalize(basis, perturber, R_grid[i], opt, out.reference_energy, k_energy, i);
    });

    for (std::size_t i = top; i-- > bottom;) {
      Eigenpairs& ep = block[i - bottom];
      out.reliable[i] = ep.reliable;
      std::vector<Eigen::Index> pick(nc);
      std::vector<Eigen::VectorXd> vec(nc);

      if (i == nR - 1) {
        if (all) {
          for (std::size_t c = 0; c < nc; ++c) {
            pick[c] = static_cast<Eigen::Index>(c);
            vec[c] = ep.vectors.col(pick[c]);
          }
        } else {
          Eigen::Index j = 0;
          ep.vectors.row(static_cast<Eigen::Index>(basis.basis.target)).cwiseAbs().maxCoeff(&j);
          Eigen::VectorXd e = Eigen::VectorXd::Zero(nb);
          e[static_cast<Eigen::Index>(basis.basis.target)] = 1.0;
          pick[0] = j;
          vec[0] = closest_in_eigenspace(ep, j, e);
        }
      } else if (all) {
        align_degenerate(ep, prev);
        const Eigen::MatrixXd O = (ep.vectors.transpose() * prev).cwiseAbs();
        struct Cand {
          double ov;
          double de;
          Eigen::Index j;
          std::size_t c;
        };
        std::vector<Cand> cands;
        cands.reserve(static_cast<std::size_t>(nb) * nc);
        for (Eigen::Index j = 0; j < nb; ++j) {
          for (std::size_t c = 0; c < nc; ++c) {
            cands.push_back({O(j, static_cast<Eigen::Index>(c)), std::abs(ep.values[j] - prev_energy[c]), j, c});
          }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
          if (std::abs(a.ov - b.ov) > 1e-9) return a.ov > b.ov;
          return a.de < b.de;
        });
        std::vector<bool> used_j(static_cast<std::size_t>(nb), false), used_c(nc, false);
        std::size_t assigned = 0;
        for (const auto& cd : cands) {
          if (assigned == nc) break;
          if (used_j[static_cast<std::size_t>(cd.j)] || used_c[cd.c]) continue;
          used_j[static_cast<std::size_t>(cd.j)] = true;
          used_c[cd.c] = true;
          pick[cd.c] = cd.j;
          vec[cd.c] = ep.vectors.col(cd.j);
          ++assigned;
        }
      } else {
        const Eigen::VectorXd o = ep.vectors.transpose() * prev.col(0);
        Eigen::Index j = 0;
        o.cwiseAbs().maxCoeff(&j);
        pick[0] = j;
        vec[0] = closest_in_eigenspace(ep, j, prev.col(0));
      }

      if (prev.size() == 0) prev.resize(nb, static_cast<Eigen::Index>(nc));
      for (std::size_t c = 0; c < nc; ++c) {
        Eigen::VectorXd v = vec[c];
        if (i != nR - 1 && v.dot(prev.col(static_cast<Eigen::Index>(c))) < 0.0) v = -v;
        prev.col(static_cast<Eigen::Index>(c)) = v;
        prev_energy[c] = ep.values[pick[c]];
        out.curves[c][i] = ep.values[pick[c]];
        out.adiabatic_index[c][i] = static_cast<int>(pick[c]);
        fix_sign(v);
        out.eigvecs[c][i] = std::move(v);
      }
    }
    top = bottom;
  }

  if (all) {
    if (basis.basis.kind == BasisKind::DegenerateManifold) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < nc; ++c) {
        const double m = *std::min_element(out.curves[c].begin(), out.curves[c].end());
        if (m < best) {
          best = m;
          out.target_curve = c;
        }
      }
    } else {
      double best = -1.0;
      const auto t = static_cast<Eigen::Index>(basis.basis.target);
      for (std::size_t c = 0; c < nc; ++c) {
        const double w = std::abs(out.eigvecs[c][nR - 1][t]);
        if (w > best) {
          best = w;
          out.target_curve = c;
        }
      }
    }
  }
  return out;
}

PotentialCurveSet pec_low_l_swave(const RadialWavefunction& state, const SpeciesData& perturber,
                                  const std::vector<double>& R_grid) {
  const auto& st = state.state();
  if (st.l > 2) throw UsageError("pec_low_l_swave needs l <= 2");
  PotentialCurveSet out;
  out.rydberg_species = st.species;
  out.perturber_species = perturber.name;
  out.basis.species = st.species;
  out.basis.kind = BasisKind::SingleState;
  out.basis.states = {st};
  out.R = R_grid;
  out.reference_energy = st.energy;
  out.reference_label = "isolated " + st.species + " n=" + std::to_string(st.n) +
                        " l=" + std::to_string(st.l) + " line";
  out.curves.assign(1, std::vector<double>(R_grid.size()));
  out.eigvecs.assign(1, std::vector<Eigen::VectorXd>(R_grid.size(), Eigen::VectorXd::Ones(1)));
  out.adiabatic_index.assign(1, std::vector<int>(R_grid.size(), 0));
  out.reliable.assign(R_grid.size(), true);
  const double Y2 = (2.0 * st.l + 1.0) / (4.0 * units::kPi);
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    const double R = R_grid[i];
    const double u = state.sample_u(R);
    const double k = semiclassical_k(st.energy, R).k;
    out.curves[0][i] = 2.0 * units::kPi * s_wave_length(perturber, k) * (u / R) * (u / R) * Y2;
  }
  return out;
}

std::vector<double> first_order_mixing(const RadialWavefunction& state, const SpeciesData& perturber,
                                       double R, const std::vector<RadialWavefunction>& others,
                                       double degeneracy_threshold) {
  const auto& st = state.state();
  const double k = semiclassical_k(st.energy, R).k;
  const double g = 2.0 * units::kPi * s_wave_length(perturber, k);
  const double psi_t = state.sample_u(R) / R * angular_factor(st.l);
  std::vector<double> c;
  c.reserve(others.size());
  for (const auto& o : others) {
    const auto& so = o.state();
    const double dE = st.energy - so.energy;
    if (std::abs(dE) < degeneracy_threshold) {
      std::ostringstream os;
      os << "states n=" << st.n << " l=" << st.l << " and n=" << so.n << " l=" << so.l
         << " are near-degenerate (|dE| = " << std::abs(dE)
         << " hartree); use pec_diagonalize instead";
      throw DegeneracyError(os.str());
    }
    const double psi_o = o.sample_u(R) / R * angular_factor(so.l);
    c.push_back(g * psi_o * psi_t / dE);
  }
  return c;
}

std::vector<WellDescriptor> find_wells(const std::vector<double>& R_all, const std::vector<double>& V_all,
                                       const WellSearch& search) {
  if (R_all.size() != V_all.size()) throw UsageError("find_wells: R and V differ in length");
  std::size_t lo = 0, hi = R_all.size();
  if (search.R_lo) lo = static_cast<std::size_t>(std::lower_bound(R_all.begin(), R_all.end(), *search.R_lo) - R_all.begin());
  if (search.R_hi) hi = static_cast<std::size_t>(std::upper_bound(R_all.begin(), R_all.end(), *search.R_hi) - R_all.begin());
  if (hi <= lo + 2) return {};
  const std::vector<double> R(R_all.begin() + static_cast<std::ptrdiff_t>(lo), R_all.begin() + static_cast<std::ptrdiff_t>(hi));
  const std::vector<double> V(V_all.begin() + static_cast<std::ptrdiff_t>(lo), V_all.begin() + static_cast<std::ptrdiff_t>(hi));
  const std::size_t n = V.size();

  std::vector<std::size_t> kept;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(V[i] < V[i - 1] && V[i] <= V[i + 1])) continue;
    std::size_t j = i;
    double rmax = V[i];
    while (j < n - 1 && V[j + 1] >= V[i]) rmax = std::max(rmax, V[++j]);
    const bool right_open = j == n - 1;
    j = i;
    double lmax = V[i];
    while (j > 0 && V[j - 1] >= V[i]) lmax = std::max(lmax, V[--j]);
    const bool left_open = j == 0;
    double bar = std::numeric_limits<double>::infinity();
    if (!left_open) bar = std::min(bar, lmax);
    if (!right_open) bar = std::min(bar, rmax);
    else bar = std::min(bar, V[n - 1]);
    if (bar - V[i] > search.depth_floor) kept.push_back(i);
  }

  std::vector<WellDescriptor> out;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    std::size_t lb = 0, rb = n - 1;
    if (k > 0) {
      lb = kept[k - 1];
      for (std::size_t t = kept[k - 1]; t <= i; ++t) if (V[t] > V[lb]) lb = t;
    }
    if (k + 1 < kept.size()) {
      rb = i;
      for (std::size_t t = i; t <= kept[k + 1]; ++t) if (V[t] > V[rb]) rb = t;
    }
    WellDescriptor w;
    w.R_min = R[i];
    w.R_left = R[lb];
    w.R_right = R[rb];
    w.V_min = V[i];
    w.depth = V[i] - search.asymptote;
    w.barrier = std::min(V[lb], V[rb]);
    out.push_back(w);
  }
  std::reverse(out.begin(), out.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k].index = static_cast<int>(k) + 1;
  return out;
}

Eigen::MatrixXd dipole_matrix(const PreparedBasis& basis) {
  const auto nb = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index a = 0; a < nb; ++a) {
    for (Eigen::Index b = 0; b < a; ++b) {
      const auto& wa = basis.wavefunctions[static_cast<std::size_t>(a)];
      const auto& wb = basis.wavefunctions[static_cast<std::size_t>(b)];
      const int la = wa.state().l, lb = wb.state().l;
      if (std::abs(la - lb) != 1) continue;
      const int L = std::min(la, lb);
      const double ang = (L + 1.0) / std::sqrt((2.0 * L + 1.0) * (2.0 * L + 3.0));
      const double v = radial_integral(wa, wb, 1) * ang;
      D(a, b) = v;
      D(b, a) = v;
    }
  }
  return D;
}

double dipole_moment(const Eigen::MatrixXd& z_matrix, const Eigen::VectorXd& eigvec) {
  if (z_matrix.rows() != eigvec.size()) throw UsageError("eigvec dimension does not match basis");
  return eigvec.dot(z_matrix * eigvec) * units::kDebyePerAU;
}

double dipole_moment(const PreparedBasis& basis, const Eigen::VectorXd& eigvec) {
  return dipole_moment(dipole_matrix(basis), eigvec);
}

std::size_t nearest_index(const std::vector<double>& grid, double R) {
  if (grid.empty()) throw UsageError("empty grid");
  auto it = std::lower_bound(grid.begin(), grid.end(), R);
  if (it == grid.end()) return grid.size() - 1;
  const auto i = static_cast<std::size_t>(it - grid.begin());
  if (i > 0 && std::abs(grid[i - 1] - R) <= std::abs(grid[i] - R)) return i - 1;
  return i;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw UsageError("linspace needs at least 2 points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

const char* to_string(ReferenceKind kind) {
  return kind == ReferenceKind::TargetState ? "target-state" : "hydrogenic-line";
}

}  // namespace ulrm
