#include <cmath>

#include "doctest.h"
#include "ulrm/scattering.hpp"
#include "ulrm/species.hpp"
#include "ulrm/units.hpp"

using namespace ulrm;

TEST_CASE("semiclassical wavenumber") {
  const double E = -4.081633e-4;
  const auto tp = semiclassical_k(E, 1.0 / 4.081633e-4);
  CHECK(tp.k == doctest::Approx(0.0).scale(1e-6));
  CHECK(semiclassical_k(E, 1225.0).k == doctest::Approx(2.8573e-2).epsilon(1e-4));
  const auto far = semiclassical_k(E, 5000.0);
  CHECK(far.forbidden);
  CHECK(far.k == 0.0);
  double prev = 1e9;
  for (double r = 1.0; r < 2400.0; r *= 1.3) {
    const double k = semiclassical_k(E, r).k;
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("s-wave scattering length") {
  const auto& rb = species_lookup("Rb");
  CHECK(s_wave_length(rb, 0.0) == -18.5);
  CHECK(s_wave_length(species_lookup("Cs"), 0.0) == -21.7);
  CHECK(s_wave_length(rb, 2.8573e-2) == doctest::Approx(-8.949).epsilon(1e-3));
  // affine in k
  const double k1 = 0.01, k2 = 0.03;
  CHECK(s_wave_length(rb, 0.5 * (k1 + k2)) ==
        doctest::Approx(0.5 * (s_wave_length(rb, k1) + s_wave_length(rb, k2))).epsilon(1e-13));
}

TEST_CASE("p-wave resonance") {
  const auto& rb = species_lookup("Rb");
  const double er = rb.pwave.E_res;
  CHECK(p_wave_phase_shift(rb, er).delta == doctest::Approx(units::kPi / 2).epsilon(1e-14));
  CHECK_FALSE(p_wave_phase_shift(rb, er).extrapolated);
  CHECK(p_wave_phase_shift(rb, units::ev_to_hartree(0.2)).extrapolated);
  // monotonic across the resonance, E_res ± Γ
  for (const char* name : {"Rb", "Cs"}) {
    const auto& sp = species_lookup(name);
    const double top = sp.pwave.E_res + sp.pwave.Gamma;
    double prev = -10.0;
    for (double e = 0.0; e <= top; e += top / 2000) {
      const double d = p_wave_phase_shift(sp, e).delta;
      CHECK(d > prev);
      prev = d;
    }
  }
}

TEST_CASE("p-wave volume matches -tan(delta)/k^3 and masks one window") {
  const auto& rb = species_lookup("Rb");
  for (double k : {0.01, 0.03, 0.05, 0.08}) {
    const auto ps = p_wave_phase_shift(rb, 0.5 * k * k);
    const auto v = p_wave_volume(rb, k);
    if (v.reliable) CHECK(v.value == doctest::Approx(-ps.tan_delta / (k * k * k)).epsilon(1e-10));
  }
  CHECK(std::isfinite(p_wave_volume(rb, 0.0).value));
  int transitions = 0;
  bool prev = true;
  for (double k = 0.0; k < 0.12; k += 1e-5) {
    const bool r = p_wave_volume(rb, k).reliable;
    if (r != prev) ++transitions;
    prev = r;
  }
  CHECK(transitions == 2);
}

TEST_CASE("scattering evaluation bundles the pieces") {
  const auto& rb = species_lookup("Rb");
  const auto ev = evaluate_scattering(rb, -4.081633e-4, 1225.0);
  CHECK(ev.k == doctest::Approx(2.8573e-2).epsilon(1e-4));
  CHECK(ev.a_s == doctest::Approx(-8.949).epsilon(1e-3));
  CHECK(evaluate_scattering(rb, -4.081633e-4, 4000.0).a_s == -18.5);
}
