#include <doctest.h>

#include "wlab/errors.hpp"
#include "wlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace wlab;

namespace {

Scenario valid_1d() {
  Scenario s;
  s.dimension = 1;
  s.q = 2.0;
  s.grid_n = 16;
  s.dt = 0.01;
  s.T = 0.1;
  return s;
}

bool has_field(const std::vector<Violation>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
}

}  // namespace

TEST_CASE("derive_k") {
  CHECK(derive_k(0.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(derive_k(5.0, 1000.0, 1500.0) == doctest::Approx(3.5 / 2.25e9).epsilon(1e-12));
  CHECK(derive_k(2.0, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(derive_k(0.0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(derive_k(0.0, 1.0, -1.0), ValidationError);
}

TEST_CASE("validate_scenario") {
  CHECK(validate_scenario(valid_1d()).empty());

  SUBCASE("2D with q=1") {
    Scenario s = valid_1d();
    s.dimension = 2;
    s.q = 1.0;
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "physics.q");
    CHECK(v[0].message == "q > d-1 fails (needs q>1)");
  }
  SUBCASE("delta=1") {
    Scenario s = valid_1d();
    s.minus.delta = 1.0;
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "materials.minus.delta");
    CHECK(v[0].message == "delta must lie in open interval (0,1)");
  }
  SUBCASE("each invariant has a scenario violating only it") {
    struct Case {
      std::string field;
      void (*mutate)(Scenario&);
    };
    const Case cases[] = {
        {"physics.q", [](Scenario& s) { s.q = 0.5; }},
        {"materials.plus.lambda", [](Scenario& s) { s.plus.lambda = 0.0; }},
        {"materials.plus.rho", [](Scenario& s) { s.plus.rho = -1.0; }},
        {"materials.minus.b", [](Scenario& s) { s.minus.b = 0.0; }},
        {"materials.plus.delta", [](Scenario& s) { s.plus.delta = 0.0; }},
        {"materials.minus.k", [](Scenario& s) { s.minus.k = NAN; }},
        {"lens", [](Scenario& s) { s.lens = Box{{0.0, 0.0}, {0.5, 0.0}}; }},
        {"grid.n", [](Scenario& s) { s.grid_n = 3; }},
        {"time.dt", [](Scenario& s) { s.dt = 0.0; s.T = 1.0; }},
        {"time.T", [](Scenario& s) { s.T = 0.001; }},
        {"solver.picard_tol", [](Scenario& s) { s.solver.picard_tol = 1.0; }},
        {"solver.picard_max_iters", [](Scenario& s) { s.solver.picard_max_iters = 0; }},
        {"solver.linear_tol", [](Scenario& s) { s.solver.linear_tol = 0.0; }},
        {"solver.degeneracy_floor", [](Scenario& s) { s.solver.degeneracy_floor = 1.0; }},
        {"output.snapshot_stride", [](Scenario& s) { s.snapshot_stride = 0; }},
        {"domain.dim", [](Scenario& s) { s.dimension = 3; }},
    };
    for (const auto& c : cases) {
      Scenario s = valid_1d();
      c.mutate(s);
      const auto v = validate_scenario(s);
      INFO(c.field);
      REQUIRE(v.size() >= 1);
      CHECK(has_field(v, c.field));
      for (const auto& x : v) CHECK(x.field == c.field);
    }
  }
  SUBCASE("manufactured source needs Dirichlet and no lens") {
    Scenario s = valid_1d();
    s.mms = "standing-wave";
    CHECK(validate_scenario(s).empty());
    s.bc = BoundaryKind::neumann;
    CHECK(has_field(validate_scenario(s), "source.mms"));
  }
}

TEST_CASE("build_material_field") {
  SUBCASE("empty lens") {
    Scenario s = valid_1d();
    const auto f = build_material_field(s);
    CHECK_FALSE(f.has_interface());
    CHECK(std::all_of(f.region.begin(), f.region.end(), [](Region r) { return r == Region::minus; }));
  }
  SUBCASE("1D lens (0.4,0.6) on 10 cells") {
    Scenario s = valid_1d();
    s.grid_n = 10;
    s.lens = Box{{0.4, 0.0}, {0.6, 0.0}};
    s.plus.rho = 3.0;
    const auto f = build_material_field(s);
    for (int c = 0; c < 10; ++c) {
      const bool inside = c == 4 || c == 5;
      CHECK((f.region[c] == Region::plus) == inside);
      CHECK(f.rho[c] == (inside ? 3.0 : 1.0));
    }
    CHECK(f.interface_faces.size() == 2);
  }
  SUBCASE("2D 8x8 with the central 2x2 cells as lens") {
    Scenario s = valid_1d();
    s.dimension = 2;
    s.q = 2.0;
    s.grid_n = 8;
    s.lens = Box{{0.375, 0.375}, {0.625, 0.625}};
    const auto f = build_material_field(s);
    CHECK(std::count(f.region.begin(), f.region.end(), Region::plus) == 4);
    CHECK(f.interface_faces.size() == 8);
    // Exactly the faces with differing labels.
    const auto all = faces(f.grid);
    std::size_t differing = 0;
    for (const auto& face : all)
      if (!face.boundary() && f.region[face.lo] != f.region[face.hi]) ++differing;
    CHECK(differing == f.interface_faces.size());
  }
  SUBCASE("deterministic") {
    Scenario s = valid_1d();
    s.lens = Box{{0.3, 0.0}, {0.7, 0.0}};
    const auto a = build_material_field(s);
    const auto b = build_material_field(s);
    CHECK(a.region == b.region);
    CHECK(a.interface_faces == b.interface_faces);
    CHECK(a.lambda == b.lambda);
  }
}

TEST_CASE("profiles") {
  const std::array<double, 2> ext{1.0, 1.0};
  Profile bump{ProfileKind::gaussian_bump, 2.0, std::array<double, 2>{0.5, 0.5}, 0.1};
  CHECK(bump(0.5, 0.0, 1, ext) == doctest::Approx(2.0));
  CHECK(bump(0.6, 0.0, 1, ext) == doctest::Approx(2.0 * std::exp(-0.5)));
  Profile sine{ProfileKind::sine_mode, 1.5, std::nullopt, std::nullopt};
  CHECK(sine(0.25, 0.5, 2, ext) == doctest::Approx(1.5 * std::sin(std::numbers::pi * 0.25)));
  Profile pulse{ProfileKind::traveling_pulse, 1.0, std::array<double, 2>{0.5, 0.5}, 0.1};
  CHECK(pulse(0.5, 0.0, 1, ext) == 0.0);
  CHECK(pulse(0.6, 0.0, 1, ext) == doctest::Approx(std::exp(-0.5)));
  CHECK(Profile{}(0.3, 0.0, 1, ext) == 0.0);
  CHECK(parse_profile_kind("gaussian-bump") == ProfileKind::gaussian_bump);
  CHECK_FALSE(parse_profile_kind("square"));
}

TEST_CASE("region_window") {
  Scenario s = valid_1d();
  s.grid_n = 20;
  s.lens = Box{{0.5, 0.0}, {0.8, 0.0}};
  const auto f = build_material_field(s);
  const Window w = region_window(f, Region::minus, 2);
  // minus cells: 0..9 and 16..19; a radius-2 box must avoid the boundary and the lens.
  for (int c = 0; c < 20; ++c) {
    const bool expect = (c >= 2 && c <= 7);
    CHECK(w.contains(c) == expect);
  }
  CHECK(region_window(f, Region::plus, 1).count() == 4);
}
