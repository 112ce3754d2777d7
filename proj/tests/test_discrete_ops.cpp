#include <doctest.h>

#include "wlab/discrete_ops.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace wlab;

namespace {

constexpr double pi = std::numbers::pi;

Grid line(int n, double L = 1.0) {
  Grid g;
  g.dim = 1;
  g.n = n;
  g.extent = {L, 1.0};
  return g;
}

Grid square(int n) {
  Grid g;
  g.dim = 2;
  g.n = n;
  return g;
}

}  // namespace

TEST_CASE("gradient") {
  const Grid g = line(8);
  const auto c = sample(g, [](double, double) { return 3.0; });
  CHECK(gradient(c, BoundaryValues<double>{{3.0, 0.0}, {3.0, 0.0}}).values.cwiseAbs().maxCoeff() == 0.0);

  const auto lin = sample(g, [](double x, double) { return x; });
  const auto gl = gradient(lin);
  const auto all = faces(g);
  for (std::size_t f = 0; f < all.size(); ++f)
    if (!all[f].boundary()) CHECK(gl[static_cast<Index>(f)] == doctest::Approx(1.0).epsilon(1e-14));

  // centers 0.125, 0.375, 0.625, 0.875; face at 0.5 is face 2
  const auto sq = sample(line(4), [](double x, double) { return x * x; });
  CHECK(gradient(sq)[2] == doctest::Approx((0.625 * 0.625 - 0.375 * 0.375) / 0.25));
  CHECK(gradient(sq)[2] == doctest::Approx(1.0));
}

TEST_CASE("gradient at boundaries") {
  Grid g = line(4);
  const auto u = sample(g, [](double x, double) { return x; });
  // Dirichlet ghost: 2 (u_0 - 0) / h = 2 * 0.125 / 0.25
  const auto gd = gradient(u);
  CHECK(gd[0] == doctest::Approx(1.0));
  CHECK(gd[4] == doctest::Approx(2.0 * (0.0 - 0.875) / 0.25));
  g.bc = BoundaryKind::neumann;
  const auto un = sample(g, [](double x, double) { return x; });
  const auto gn = gradient(un);
  CHECK(gn[0] == doctest::Approx(1.0));
  CHECK(gn[4] == doctest::Approx(1.0));
}

TEST_CASE("div_flux") {
  SUBCASE("linear u, uniform coefficient") {
    const Grid g = line(10);
    const auto u = sample(g, [](double x, double) { return 2.0 * x + 1.0; });
    const auto grad = gradient(u, BoundaryValues<double>{{1.0, 0.0}, {3.0, 0.0}});
    GridFunctiond coef(g, Centering::face);
    coef.values.setConstant(0.7);
    CHECK(div_flux(coef, grad).values.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("nonpositive coefficient") {
    const Grid g = line(4);
    GridFunctiond coef(g, Centering::face);
    const GridFunctiond grad(g, Centering::face);
    CHECK_THROWS_AS(div_flux(coef, grad), ValidationError);
  }
  SUBCASE("zero gradient") {
    const Grid g = square(4);
    GridFunctiond coef(g, Centering::face);
    coef.values.setOnes();
    const GridFunctiond grad(g, Centering::face);
    CHECK(div_flux(coef, grad).values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two coefficients, steady profile") {
    // -(a u')' = 0 on (0,1), a = 1 left of 1/2 and 4 right, u(0)=0, u(1)=1.
    // Flux continuity: s_left = 4 s_right and (s_left + s_right)/2 = 1.
    const double s_right = 2.0 / 5.0;
    const double s_left = 4.0 * s_right;
    auto exact = [&](double x, double) {
      return x < 0.5 ? s_left * x : s_left * 0.5 + s_right * (x - 0.5);
    };
    for (int n : {4, 10, 64}) {
      const Grid g = line(n);
      const auto u = sample(g, exact);
      const auto a = sample(g, [](double x, double) { return x < 0.5 ? 1.0 : 4.0; });
      const auto grad = gradient(u, BoundaryValues<double>{{0.0, 0.0}, {1.0, 0.0}});
      const auto coef = face_coefficients(a);
      const auto d = div_flux(coef, grad);
      CHECK(d.values.cwiseAbs().maxCoeff() <= 1e-11);
      // the face fluxes all equal s_left
      for (Index f = 0; f < grad.size(); ++f)
        CHECK(coef[f] * grad[f] == doctest::Approx(s_left).epsilon(1e-13));
    }
  }
}

TEST_CASE("harmonic_mean") {
  CHECK(harmonic_mean(2.0, 2.0) == 2.0);
  CHECK(harmonic_mean(1.0, 4.0) == doctest::Approx(1.6));
}

TEST_CASE("difference_quotient") {
  const Grid g = line(20);
  const auto c = sample(g, [](double, double) { return 5.0; });
  const auto dc = difference_quotient(c, 0, 3);
  for (Index i = 0; i < g.cell_count(); ++i)
    if (dc.valid[static_cast<std::size_t>(i)]) CHECK(dc.values[i] == 0.0);

  const auto lin = sample(g, [](double x, double) { return x; });
  for (int l : {-4, -1, 1, 2, 7}) {
    const auto d = difference_quotient(lin, 0, l);
    int valid = 0;
    for (Index i = 0; i < g.cell_count(); ++i) {
      if (!d.valid[static_cast<std::size_t>(i)]) continue;
      ++valid;
      CHECK(d.values[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(valid == 20 - std::abs(l));
  }

  // h = 0.05; shifting the sine puts sin(0.2 pi) on cell 3 (center 0.175)
  const auto s = sample(g, [](double x, double) { return std::sin(pi * (x + 0.025)); });
  const auto ds = difference_quotient(s, 0, 2);
  const double expect = (std::sin(0.3 * pi) - std::sin(0.2 * pi)) / 0.1;
  CHECK(ds.values[3] == doctest::Approx(expect).epsilon(1e-13));
  CHECK(ds.values[3] == doctest::Approx(2.2123).epsilon(1e-4));

  CHECK_THROWS_AS(difference_quotient(lin, 0, 20), ValidationError);
  CHECK_THROWS_AS(difference_quotient(lin, 0, 0), ValidationError);
  CHECK_THROWS_AS(difference_quotient(lin, 1, 1), ValidationError);
}

TEST_CASE("ibp_residual") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  const Grid g = line(64);
  SUBCASE("phi zero") {
    const auto u = sample(g, [&](double, double) { return u01(rng); });
    const GridFunctiond phi(g, Centering::cell);
    CHECK(ibp_residual(u, phi, 0, 2) == 0.0);
  }
  SUBCASE("u constant") {
    const auto u = sample(g, [](double, double) { return 2.5; });
    auto phi = sample(g, [&](double x, double) { return (x > 0.1 && x < 0.9) ? u01(rng) : 0.0; });
    // Both sums are exactly representable sums of cancelling terms up to rounding.
    CHECK(std::abs(ibp_residual(u, phi, 0, 3)) <= 1e-12);
  }
  SUBCASE("random data") {
    const auto u = sample(g, [&](double, double) { return u01(rng); });
    const auto phi = sample(g, [&](double x, double) { return (x > 0.05 && x < 0.95) ? u01(rng) : 0.0; });
    const double scale = std::sqrt(g.cell_volume() * u.values.squaredNorm()) *
                         std::sqrt(g.cell_volume() * phi.values.squaredNorm());
    CHECK(std::abs(ibp_residual(u, phi, 0, 2)) <= 1e-13 * scale);
  }
  SUBCASE("support violation") {
    const auto u = sample(g, [](double, double) { return 1.0; });
    const auto phi = sample(g, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(ibp_residual(u, phi, 0, 1), ValidationError);
  }
  SUBCASE("2D along y") {
    const Grid g2 = square(16);
    const auto u = sample(g2, [&](double, double) { return u01(rng); });
    const auto phi = sample(g2, [&](double, double y) { return (y > 0.2 && y < 0.8) ? u01(rng) : 0.0; });
    const double scale = std::sqrt(g2.cell_volume() * u.values.squaredNorm()) *
                         std::sqrt(g2.cell_volume() * phi.values.squaredNorm());
    CHECK(std::abs(ibp_residual(u, phi, 1, -3)) <= 1e-13 * scale);
  }
}

TEST_CASE("norm") {
  const Grid g = line(64);
  const Window all = full_window(g);
  const GridFunctiond zero(g, Centering::cell);
  for (auto kind : {NormKind::l2, NormKind::lp, NormKind::h1_semi, NormKind::h2_semi})
    CHECK(norm(zero, kind, all, 3.0) == 0.0);

  const auto lin = sample(g, [](double x, double) { return x; });
  // midpoint rule: sum h x_i^2 = 1/3 - h^2/12
  const double h = 1.0 / 64;
  CHECK(norm(lin, NormKind::l2, all) == doctest::Approx(std::sqrt(1.0 / 3.0 - h * h / 12.0)).epsilon(1e-12));
  CHECK(norm(lin, NormKind::l2, all) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));

  const Grid fine = line(256);
  const auto s = sample(fine, [](double x, double) { return std::sin(pi * x); });
  CHECK(norm(s, NormKind::h1_semi, full_window(fine)) == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-4));
  // |sin|_{H2} = pi^2 / sqrt(2)
  CHECK(norm(s, NormKind::h2_semi, full_window(fine)) == doctest::Approx(pi * pi / std::sqrt(2.0)).epsilon(1e-2));
  // L1 of sin is 2/pi
  CHECK(norm(s, NormKind::lp, full_window(fine), 1.0) == doctest::Approx(2.0 / pi).epsilon(1e-4));

  Window empty{Mask(64, false), 0};
  CHECK_THROWS_AS(norm(lin, NormKind::l2, empty), ValidationError);
}

TEST_CASE("quotient_bound_check") {
  const Grid g = line(128);
  const Window v = box_window(g, {0.25, 0.0}, {0.75, 0.0});
  CHECK(v.count() == 64);
  CHECK(v.margin == 32);

  SUBCASE("linear") {
    // one-sided boundary gradients keep grad u = 3 everywhere, so the ratio is sqrt(|V|)
    Grid gn = g;
    gn.bc = BoundaryKind::neumann;
    const auto u = sample(gn, [](double x, double) { return 3.0 * x; });
    for (const auto& row : quotient_bound_check(u, v, 2.0, {1, 2, 4})) {
      CHECK(row.ratio <= 1.0);
      CHECK(row.ratio == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
  }
  SUBCASE("sine") {
    const auto u = sample(g, [](double x, double) { return std::sin(pi * x); });
    for (const auto& row : quotient_bound_check(u, v, 2.0, {1, -1, 3, 8})) {
      CHECK(row.ratio <= 1.02);
      CHECK(row.ratio > 0.0);
    }
  }
  SUBCASE("kink inside the window") {
    std::vector<double> ratios;
    for (int l : {8, 4, 2, 1}) {
      const auto u = sample(g, [](double x, double) { return std::abs(x - 0.5); });
      ratios.push_back(quotient_bound_check(u, v, 2.0, {l})[0].ratio);
    }
    for (double r : ratios) {
      CHECK(std::isfinite(r));
      CHECK(r <= 1.02);
    }
  }
  SUBCASE("shift beyond the margin") {
    const auto u = sample(g, [](double x, double) { return x; });
    CHECK_THROWS_AS(quotient_bound_check(u, v, 2.0, {33}), ValidationError);
    CHECK_THROWS_AS(quotient_bound_check(u, v, 2.0, {0}), ValidationError);
  }
}
