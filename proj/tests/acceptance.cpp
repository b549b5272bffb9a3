// One line per acceptance criterion; exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "ulrm/regression.hpp"
#include "ulrm/units.hpp"

using namespace ulrm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool within(double v, double expected, double tol) { return std::abs(v - expected) <= tol * std::abs(expected); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome c1() {
  const auto r = low_l_outer_levels(species_lookup("Rb"), 35, 0, species_lookup("Rb"), 2);
  if (r.levels.size() < 2) return {false, "fewer than two bound levels"};
  const double e0 = r.levels[0].energy_shift, e1 = r.levels[1].energy_shift;
  return {within(e0, -23.18, 0.15) && within(e1, -10.44, 0.20),
          "E0 = " + num(e0) + " MHz (-23.18 +-15%), E1 = " + num(e1) + " MHz (-10.44 +-20%)"};
}

Outcome c2() {
  const auto q = dimer_quartet(55, 0);
  const bool ok = within(q.a, -1.3012, 0.15) && within(q.b, -1.8470, 0.15) && within(q.c, -3.0934, 0.15) &&
                  within(q.d, -5.6164, 0.15);
  const bool order = std::abs(q.d) > std::abs(q.c) && std::abs(q.c) > std::abs(q.b) && std::abs(q.b) > std::abs(q.a);
  return {ok && order, "a,b,c,d = " + num(q.a) + ", " + num(q.b) + ", " + num(q.c) + ", " + num(q.d) +
                           " MHz; ordering " + (order ? "ok" : "broken")};
}

Outcome c3() {
  const auto s = scaling_study(all_species_pairs(), 30, 50);
  bool ok = true;
  std::ostringstream d;
  for (const auto& x : s) {
    ok = ok && x.slope >= -6.5 && x.slope <= -5.5;
    d << x.rydberg << '-' << x.perturber << ' ' << num(x.slope) << "; ";
  }
  // ordering by |E_v0| must be the same at every n
  bool crossing = false;
  for (std::size_t r = 0; r < s[0].rows.size(); ++r) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s.size(); ++b) {
        const bool first = std::abs(s[a].rows[0].E_v0) > std::abs(s[b].rows[0].E_v0);
        const bool here = std::abs(s[a].rows[r].E_v0) > std::abs(s[b].rows[r].E_v0);
        crossing = crossing || first != here;
      }
    }
  }
  d << (crossing ? "curves cross" : "no crossings");
  return {ok && !crossing, d.str()};
}

Outcome c4() {
  const auto cs = species_lookup("Cs");
  const auto a = outer_well_dipole(cs, 42, 0, cs);
  const auto b = outer_well_dipole(cs, 42, 0, species_lookup("Rb"));
  const double da = std::abs(a.dipole_debye), db = std::abs(b.dipole_debye);
  return {within(da, 2081.0, 0.25) && within(db, 1670.0, 0.25) && da > db,
          "CsCs " + num(da) + " D (2081 +-25%), CsRb " + num(db) + " D (1670 +-25%)"};
}

Outcome c5() {
  const auto b = butterfly_scan();
  const bool covers = b.mask_segments >= 1 && b.mask_lo <= 680.0 * 1.02 && b.mask_hi >= 680.0 * 0.98;
  return {within(b.R_well, 308.0, 0.10) && covers,
          "well at " + num(b.R_well) + " a.u. (308 +-10%), mask [" + num(b.mask_lo) + ", " + num(b.mask_hi) + "]"};
}

Outcome c6() {
  const auto& rb = species_lookup("Rb");
  double lo = 0.0, hi = units::ev_to_hartree(0.1);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p_wave_phase_shift(rb, mid).delta < 0.5 * units::kPi ? lo : hi) = mid;
  }
  const double e = units::hartree_to_ev(0.5 * (lo + hi));
  int windows = 0;
  bool prev = true;
  for (double k = 0.0; k <= 0.15; k += 1e-6) {
    const bool r = p_wave_volume(rb, k).reliable;
    if (prev && !r) ++windows;
    prev = r;
  }
  return {within(e, 0.026, 0.05) && windows == 1,
          "resonance at " + num(e) + " eV, " + std::to_string(windows) + " divergence window(s)"};
}

Outcome c7() {
  const auto got = trilobite_lobes(35, 3);
  std::string d = "lobes";
  for (int g : got) d += " " + std::to_string(g);
  return {got == std::vector<int>{2, 4, 6}, d};
}

Outcome c8() {
  const DimerEnergyQuartet q{-1.3012, -1.8470, -3.0934, -5.6164, 55, 0};
  bool exact = true;
  std::size_t counts[2] = {};
  int k = 0;
  for (const char* sp : {"Rb", "Cs"}) {
    const auto lines = enumerate_lines(q, sp, 4);
    counts[k++] = lines.size();
    const bool rb = std::string(sp) == "Rb";
    for (const auto& l : lines) exact = exact && l.shift == (rb ? l.i * q.a + l.j * q.b : l.i * q.c + l.j * q.d);
  }
  return {exact && counts[0] == 14 && counts[1] == 14,
          std::string("shifts ") + (exact ? "exact" : "inexact") + ", lines " + std::to_string(counts[0]) + "/" +
              std::to_string(counts[1])};
}

Outcome c9() {
  std::ostringstream d;
  bool ok = true;

  double rms = 0.0;
  for (int n : {5, 10, 15, 20}) {
    for (int l : {0, 1, n - 1}) rms = std::max(rms, hydrogen_rms(n, l));
  }
  ok = ok && rms <= 1e-4;
  d << "hydrogen rms " << num(rms);

  const auto& rb = species_lookup("Rb");
  const auto grid = GridSpec::for_n(36);
  const auto a = solve_radial(make_state(rb, 35, 0), grid);
  const auto b = solve_radial(make_state(rb, 36, 0), grid);
  const double ov = std::abs(radial_integral(a, b));
  ok = ok && ov <= 1e-3;
  d << "; overlap " << num(ov);

  const auto pb = prepare_basis(extended_basis(rb, 35, 0));
  double tr_err = 0.0, res_err = 0.0;
  for (double R : {350.0, 900.0, 1900.0}) {
    const auto h = build_hamiltonian(pb, rb, R, true);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.H);
    tr_err = std::max(tr_err, std::abs(es.eigenvalues().sum() - h.H.trace()) / h.H.norm());
    const Eigen::MatrixXd r = h.H * es.eigenvectors() - es.eigenvectors() * es.eigenvalues().asDiagonal();
    res_err = std::max(res_err, r.norm() / h.H.norm());
  }
  ok = ok && tr_err <= 1e-10 && res_err <= 1e-10;
  d << "; trace " << num(tr_err) << "; residual " << num(res_err);

  BasisSet two;
  two.species = "Rb";
  two.kind = BasisKind::ExtendedPWave;
  two.states = {make_state(rb, 35, 0), make_state(rb, 34, 1)};
  const auto p2 = prepare_basis(two);
  double err2 = 0.0;
  PecOptions with_p;
  with_p.include_p_wave = true;
  for (double R : {700.0, 1300.0, 2000.0}) {
    const auto h = build_hamiltonian(p2, rb, R, true);
    const auto pec = pec_diagonalize(p2, rb, {R, R + 1.0}, with_p);
    const double x = h.H(0, 0), y = h.H(0, 1), z = h.H(1, 1);
    const double lo = 0.5 * (x + z) - std::sqrt(0.25 * (x - z) * (x - z) + y * y);
    const double got = std::min(pec.curves[0][0], pec.curves[1][0]);
    err2 = std::max(err2, std::abs(got - lo) / std::max({std::abs(x), std::abs(y), std::abs(z)}));
  }
  ok = ok && err2 <= 1e-12;
  d << "; 2x2 " << num(err2);

  const double mu = 80000.0, w = 1e-7;
  std::vector<double> R, V;
  for (int i = 0; i <= 400; ++i) {
    R.push_back(1500.0 + i);
    V.push_back(0.5 * mu * w * w * (R.back() - 1700.0) * (R.back() - 1700.0));
  }
  WellDescriptor well{1, 1700.0, R.front(), R.back(), 0.0, 0.0, V.front()};
  const auto ho = solve_vibrational(R, V, well, mu, 3, {2000, 0.0});
  double ho_err = 0.0;
  for (const auto& l : ho) ho_err = std::max(ho_err, std::abs(l.energy / (w * (l.v + 0.5)) - 1.0));
  ok = ok && ho.size() == 3 && ho_err <= 1e-3;
  d << "; oscillator " << num(ho_err);

  const auto low = low_l_outer_levels(rb, 35, 0, rb, 2);
  const auto pec = pec_low_l_swave(solve_radial(make_state(rb, 35, 0), GridSpec::for_n(35)), rb,
                                   linspace(0.3 * 35 * 35, 2.9 * 35 * 35, 6000));
  const double m = reduced_mass(rb.mass, rb.mass);
  const auto c800 = solve_vibrational(pec.R, pec.curves[0], low.well, m, 2, {800, 0.05});
  const auto c1600 = solve_vibrational(pec.R, pec.curves[0], low.well, m, 2, {1600, 0.05});
  double conv = 1.0;
  if (c800.size() == 2 && c1600.size() == 2) {
    conv = 0.0;
    for (int v = 0; v < 2; ++v) conv = std::max(conv, std::abs(c800[v].energy / c1600[v].energy - 1.0));
  }
  ok = ok && conv < 0.01;
  d << "; grid doubling " << num(conv);
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
  const double budget[] = {30.0, 120.0, 600.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  int failed = 0;
  for (int i = 0; i < 9; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget[i] > 0.0 && sec > budget[i]) {
      o.pass = false;
      o.detail += "; over the " + num(budget[i]) + " s budget";
    }
    std::printf("criterion %d: %s  [%.1f s]  %s\n", i + 1, o.pass ? "PASS" : "FAIL", sec, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
