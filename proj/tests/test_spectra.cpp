#include <cmath>

#include "doctest.h"
#include "ulrm/error.hpp"
#include "ulrm/pec.hpp"
#include "ulrm/spectra.hpp"

using namespace ulrm;

namespace {
const DimerEnergyQuartet kQ{-1.3012, -1.8470, -3.0934, -5.6164, 55, 0};
}

TEST_CASE("additive shifts") {
  CHECK(polyatomic_shift(kQ, "Rb", 0, 0) == 0.0);
  CHECK(polyatomic_shift(kQ, "Rb", 1, 0) == -1.3012);
  CHECK(polyatomic_shift(kQ, "Cs", 2, 2) == doctest::Approx(-17.4196).epsilon(1e-14));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (const char* s : {"Rb", "Cs"}) {
          const double lhs = polyatomic_shift(kQ, s, i + k, j + 1);
          const double rhs = polyatomic_shift(kQ, s, i, j) + polyatomic_shift(kQ, s, k, 1);
          CHECK(std::abs(lhs - rhs) <= 4 * 2.3e-16 * std::abs(lhs));
        }
      }
    }
  }
}

TEST_CASE("line enumeration") {
  const auto one = enumerate_lines(kQ, "Rb", 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0].shift == kQ.b);
  CHECK(one[1].shift == kQ.a);
  for (int N = 1; N <= 10; ++N) {
    CHECK(enumerate_lines(kQ, "Cs", N).size() == static_cast<std::size_t>(N * (N + 3) / 2));
  }
  const auto four = enumerate_lines(kQ, "Cs", 4);
  CHECK(four.size() == 14);
  for (std::size_t k = 1; k < four.size(); ++k) CHECK(four[k - 1].shift < four[k].shift);
  for (const auto& l : four) CHECK(l.shift == kQ.c * l.i + kQ.d * l.j);
  LineOptions per;
  per.cap = AtomCap::PerSpecies;
  CHECK(enumerate_lines(kQ, "Rb", 4, per).size() == 24);
  CHECK_THROWS_AS(enumerate_lines(kQ, "Rb", 11), UsageError);
}

TEST_CASE("coincident lines merge") {
  const DimerEnergyQuartet q{-1.0, -2.0, -1.0, -2.0, 55, 0};
  const auto lines = enumerate_lines(q, "Rb", 2);
  // shifts: -1 (1,0), -2 (2,0) and (0,1), -3 (1,1), -4 (0,2)
  REQUIRE(lines.size() == 4);
  CHECK(lines[2].shift == -2.0);
  CHECK(lines[2].weight == 2.0);
  LineOptions po;
  po.lambda_rb = 0.5;
  po.lambda_cs = 0.2;
  const auto w = enumerate_lines(kQ, "Rb", 1, po);
  CHECK(w[1].weight == doctest::Approx(0.5 * std::exp(-0.5) * std::exp(-0.2)));
}

TEST_CASE("rendering") {
  const auto lines = enumerate_lines(kQ, "Rb", 3);
  const double fwhm = 0.05;
  const auto grid = linspace(lines.front().shift - 10 * fwhm, lines.back().shift + 10 * fwhm, 40001);
  const auto s = render_spectrum(lines, fwhm, grid);
  CHECK_FALSE(s.coverage_warning);
  double area = 0.0, total = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    area += 0.5 * (s.intensity[k] + s.intensity[k - 1]) * (grid[k] - grid[k - 1]);
  }
  for (const auto& l : lines) total += l.weight;
  CHECK(std::abs(area - total) / total < 0.01);
  const std::vector<SpectrumLine> single{{"Rb", 1, 0, -1.3012, 1.0}};
  const auto g2 = linspace(-2.0, -0.5, 1501);
  const auto s2 = render_spectrum(single, 0.01, g2);
  std::size_t best = 0;
  for (std::size_t k = 0; k < g2.size(); ++k) {
    if (s2.intensity[k] > s2.intensity[best]) best = k;
  }
  CHECK(std::abs(g2[best] + 1.3012) <= g2[1] - g2[0]);
  CHECK(render_spectrum(single, 0.01, linspace(0.0, 1.0, 11)).coverage_warning);
}
