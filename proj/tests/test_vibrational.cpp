#include <cmath>

#include <functional>

#include "doctest.h"
#include "ulrm/error.hpp"
#include "ulrm/vibrational.hpp"

using namespace ulrm;

namespace {

WellDescriptor whole(const std::vector<double>& R, const std::vector<double>& V, double barrier) {
  WellDescriptor w;
  w.index = 1;
  w.R_left = R.front();
  w.R_right = R.back();
  std::size_t k = 0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (V[i] < V[k]) k = i;
  }
  w.R_min = R[k];
  w.V_min = w.depth = V[k];
  w.barrier = barrier;
  return w;
}

// Even and odd bound states of a finite square well V = -D on |x| < L/2, by
// scanning the matching conditions for sign changes.
int square_well_count(double D, double L, double mu) {
  const double z0 = 0.5 * L * std::sqrt(2.0 * mu * D);
  auto even = [&](double z) { return z * std::sin(z) - std::sqrt(std::max(0.0, z0 * z0 - z * z)) * std::cos(z); };
  auto odd = [&](double z) { return -z * std::cos(z) - std::sqrt(std::max(0.0, z0 * z0 - z * z)) * std::sin(z); };
  int count = 0;
  const int steps = 200000;
  for (auto f : {std::function<double(double)>(even), std::function<double(double)>(odd)}) {
    double prev = f(1e-9);
    for (int i = 1; i <= steps; ++i) {
      const double cur = f(z0 * i / steps);
      if ((cur > 0) != (prev > 0)) ++count;
      prev = cur;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("harmonic oscillator levels") {
  const double mu = 80000.0, w = 1e-7;
  std::vector<double> R, V;
  for (int i = 0; i <= 400; ++i) {
    R.push_back(1500.0 + i);
    const double x = R.back() - 1700.0;
    V.push_back(0.5 * mu * w * w * x * x);
  }
  const auto lv = solve_vibrational(R, V, whole(R, V, V.front()), mu, 4, {2000, 0.0});
  REQUIRE(lv.size() == 4);
  for (int v = 0; v < 4; ++v) {
    CHECK(std::abs(lv[v].energy - w * (v + 0.5)) <= 1e-3 * w * (v + 0.5));
    CHECK(lv[v].v == v);
  }
}

TEST_CASE("square well bound-state count") {
  const double mu = 80000.0, L = 100.0;
  for (double D : {3.86e-8, 1.25e-7, 4.46e-7}) {
    std::vector<double> R, V;
    for (int i = 0; i <= 600; ++i) {
      R.push_back(1000.0 + i * 0.5);
      V.push_back(std::abs(R.back() - 1150.0) < L / 2 ? -D : 0.0);
    }
    auto w = whole(R, V, 0.0);
    const auto lv = solve_vibrational(R, V, w, mu, 50, {3000, 0.0});
    int below = 0;
    for (const auto& l : lv) {
      if (l.energy < -1e-3 * D) ++below;
    }
    CAPTURE(D);
    CHECK(below == square_well_count(D, L, mu));
  }
}

namespace {

struct Morse {
  std::vector<double> R, V;
  WellDescriptor w;
};

Morse morse() {
  Morse m;
  for (int i = 0; i <= 600; ++i) {
    m.R.push_back(1400.0 + i);
    const double e = 1.0 - std::exp(-(m.R.back() - 1800.0) / 120.0);
    m.V.push_back(4e-9 * (e * e - 1.0));
  }
  m.w = whole(m.R, m.V, 0.0);
  return m;
}

}  // namespace

TEST_CASE("grid and margin convergence, node theorem, mass ordering") {
  const auto m = morse();
  const double mu = reduced_mass(158432.0, 158432.0);
  const auto a = solve_vibrational(m.R, m.V, m.w, mu, 3, {800, 0.05});
  const auto b = solve_vibrational(m.R, m.V, m.w, mu, 3, {1600, 0.05});
  const auto c = solve_vibrational(m.R, m.V, m.w, mu, 3, {800, 0.10});
  REQUIRE(a.size() >= 2);
  for (std::size_t v = 0; v < a.size() && v < b.size(); ++v) {
    CHECK(std::abs(a[v].energy - b[v].energy) < 0.01 * std::abs(b[v].energy));
  }
  CHECK(std::abs(a[0].energy - c[0].energy) < 0.005 * std::abs(a[0].energy));
  for (const auto& l : a) {
    int nodes = 0;
    double mx = 0.0;
    for (double x : l.chi) mx = std::max(mx, std::abs(x));
    double prev = 0.0;
    for (double x : l.chi) {
      if (std::abs(x) < 1e-6 * mx) continue;
      if (prev != 0.0 && (x > 0) != (prev > 0)) ++nodes;
      prev = x;
    }
    CHECK(nodes == l.v);
    CHECK(l.energy >= m.w.V_min);
    CHECK(l.energy < 0.0);
  }
  const auto heavy = solve_vibrational(m.R, m.V, m.w, reduced_mass(158432.0, 242282.0), 3);
  for (std::size_t v = 0; v < a.size() && v < heavy.size(); ++v) CHECK(heavy[v].energy < a[v].energy);
}

TEST_CASE("vibrational resolution guards") {
  const auto m = morse();
  CHECK_THROWS_AS(solve_vibrational(m.R, m.V, m.w, 1000.0, 2, {10, 0.05}), ResolutionError);
  auto narrow = m.w;
  narrow.R_left = 1799.5;
  narrow.R_right = 1801.5;
  CHECK_THROWS_AS(solve_vibrational(m.R, m.V, narrow, 1000.0, 2), ResolutionError);
  CHECK(reduced_mass(2.0, 2.0) == 1.0);
}
