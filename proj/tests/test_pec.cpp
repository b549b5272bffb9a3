#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ulrm/error.hpp"
#include "ulrm/pec.hpp"
#include "ulrm/units.hpp"

using namespace ulrm;

namespace {

PreparedBasis two_state_basis() {
  const auto& rb = species_lookup("Rb");
  BasisSet b;
  b.species = "Rb";
  b.kind = BasisKind::ExtendedPWave;
  b.states = {make_state(rb, 35, 0), make_state(rb, 34, 1)};
  b.target = 0;
  return prepare_basis(std::move(b));
}

const PreparedBasis& extended35() {
  static const PreparedBasis pb = prepare_basis(extended_basis(species_lookup("Rb"), 35, 0));
  return pb;
}

}  // namespace

TEST_CASE("Hamiltonian is symmetric, conserves trace and diagonalizes cleanly") {
  const auto& pb = extended35();
  const auto& rb = species_lookup("Rb");
  for (double R : {400.0, 1200.0, 1900.0}) {
    const auto h = build_hamiltonian(pb, rb, R, true);
    CHECK((h.H - h.H.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.H);
    const double tr = h.H.trace();
    CHECK(std::abs(es.eigenvalues().sum() - tr) <= 1e-10 * std::max(std::abs(tr), h.H.norm()));
    const Eigen::MatrixXd res = h.H * es.eigenvectors() - es.eigenvectors() * es.eigenvalues().asDiagonal();
    CHECK(res.norm() <= 1e-10 * h.H.norm());
  }
}

TEST_CASE("2x2 curves agree with the closed-form eigenvalues") {
  const auto pb = two_state_basis();
  const auto& rb = species_lookup("Rb");
  const auto R = linspace(600.0, 2300.0, 60);
  PecOptions opt;
  opt.include_p_wave = true;
  const auto pec = pec_diagonalize(pb, rb, R, opt);
  REQUIRE(pec.size() == 2);
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto h = build_hamiltonian(pb, rb, R[i], true);
    const double a = h.H(0, 0), b = h.H(0, 1), d = h.H(1, 1);
    const double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const double lo = std::min(pec.curves[0][i], pec.curves[1][i]);
    const double hi = std::max(pec.curves[0][i], pec.curves[1][i]);
    const double scale = std::max({std::abs(a), std::abs(d), std::abs(b)});
    CHECK(std::abs(lo - (mid - rad)) <= 1e-12 * scale);
    CHECK(std::abs(hi - (mid + rad)) <= 1e-12 * scale);
  }
}

TEST_CASE("s-wave only: a degenerate manifold has a single shifted curve") {
  const auto& rb = species_lookup("Rb");
  const auto pb = prepare_basis(degenerate_manifold_basis(species_lookup("H"), 20, 0));
  const double R = 600.0;
  const auto h = build_hamiltonian(pb, rb, R, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.H);
  const Eigen::VectorXd psi = contact_amplitudes(pb, R);
  const double a_s = evaluate_scattering(rb, pb.basis.states[pb.basis.target].energy, R).a_s;
  int nonzero = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i]) > 1e-12 * h.H.norm()) ++nonzero;
  }
  CHECK(nonzero == 1);
  CHECK(es.eigenvalues()[0] == doctest::Approx(2 * units::kPi * a_s * psi.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("contact gradient matches a 3D finite difference") {
  const auto& pb = extended35();
  const double R = 1100.0;
  const auto g = contact_gradients(pb, R);
  auto psi = [&](std::size_t i, double x, double z) {
    const double r = std::hypot(x, z);
    const int l = pb.basis.states[i].l;
    const double y = std::sqrt((2 * l + 1) / (4 * units::kPi)) * std::legendre(l, z / r);
    return pb.wavefunctions[i].evaluate_u(r) / r * y;
  };
  const double h = 1e-3;
  for (std::size_t i : {std::size_t{0}, pb.basis.index_of(34, 1), pb.basis.index_of(32, 7)}) {
    const double dz = (psi(i, 0.0, R + h) - psi(i, 0.0, R - h)) / (2 * h);
    const double dx = (psi(i, h, R) - psi(i, -h, R)) / (2 * h);
    CHECK(g[static_cast<Eigen::Index>(i)] == doctest::Approx(dz).epsilon(1e-5).scale(1e-12));
    CHECK(std::abs(dx) <= 1e-9 * std::max(1e-12, std::abs(dz)) + 1e-15);
  }
}

TEST_CASE("tracked curves stay smooth across the grid") {
  const auto& pb = extended35();
  const auto R = linspace(1500.0, 2300.0, 200);
  PecOptions opt;
  opt.tracking = TrackingMode::TargetOnly;
  const auto pec = pec_diagonalize(pb, species_lookup("Rb"), R, opt);
  REQUIRE(pec.size() == 1);
  const auto& v = pec.eigvecs[0];
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(std::abs(v[i].dot(v[i - 1])) > 0.9);
  CHECK_THROWS_AS(pec_diagonalize(pb, species_lookup("Rb"), {1000.0, 900.0}), UsageError);
}

TEST_CASE("well finding") {
  std::vector<double> R, V;
  for (int i = 0; i <= 200; ++i) {
    R.push_back(1000.0 + i);
    V.push_back(1e-9 * (R.back() - 1100.0) * (R.back() - 1100.0) - 1e-5);
  }
  auto w = find_wells(R, V);
  REQUIRE(w.size() == 1);
  CHECK(w[0].R_min == 1100.0);
  CHECK(w[0].index == 1);
  CHECK(w[0].depth == doctest::Approx(-1e-5));
  for (std::size_t i = 0; i < V.size(); ++i) V[i] = -1e-6 / R[i];
  CHECK(find_wells(R, V).empty());
}

TEST_CASE("dipole selection rule and parity") {
  const auto& pb = extended35();
  const auto z = dipole_matrix(pb);
  CHECK((z - z.transpose()).norm() <= 1e-12 * z.norm());
  for (std::size_t i = 0; i < pb.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (std::abs(pb.basis.states[i].l - pb.basis.states[j].l) != 1) {
        CHECK(z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0);
      }
    }
  }
  Eigen::VectorXd pure = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pb.size()));
  pure[0] = 1.0;
  CHECK(dipole_moment(pb, pure) == 0.0);
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pb.size()));
  mix[0] = mix[static_cast<Eigen::Index>(pb.basis.index_of(34, 1))] = std::sqrt(0.5);
  Eigen::VectorXd flip = mix;
  flip[0] = -flip[0];
  CHECK(dipole_moment(pb, flip) == doctest::Approx(-dipole_moment(pb, mix)));
}

TEST_CASE("first-order mixing rejects degenerate partners") {
  const auto& rb = species_lookup("Rb");
  const auto grid = GridSpec::for_n(36);
  const auto s = solve_radial(make_state(rb, 35, 0), grid);
  const auto t = solve_radial(make_state(rb, 36, 0), grid);
  CHECK(first_order_mixing(s, rb, 1500.0, {t}).size() == 1);
  CHECK_THROWS_AS(first_order_mixing(s, rb, 1500.0, {s}), DegeneracyError);
}
