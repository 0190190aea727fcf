#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "asbuilt/mesh.hpp"
#include "test_meshes.hpp"

namespace {

using namespace asbuilt;
using asbuilt::testing::unit_cube;

TEST(TriangleArea, RightTriangles) {
  EXPECT_DOUBLE_EQ(triangle_area({0, 0, 0}, {1, 0, 0}, {0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(triangle_area({0, 0, 0}, {3, 0, 0}, {0, 4, 0}), 6.0);
}

TEST(TriangleArea, CollinearIsZero) { EXPECT_EQ(triangle_area({0, 0, 0}, {1, 0, 0}, {2, 0, 0}), 0.0); }

TEST(TriangleNormal, WindingDeterminesSign) {
  EXPECT_EQ(triangle_normal({0, 0, 0}, {1, 0, 0}, {0, 1, 0}), (Vec3{0, 0, 1}));
  EXPECT_EQ(triangle_normal({0, 0, 0}, {0, 1, 0}, {1, 0, 0}), (Vec3{0, 0, -1}));
}

TEST(TriangleNormal, BelowEpsilonThrows) {
  try {
    triangle_normal({0, 0, 0}, {1, 0, 0}, {2e-13, 1e-13, 0});
    FAIL() << "expected DegenerateTriangle";
  } catch (const MeshError& e) {
    EXPECT_EQ(e.code(), MeshErrc::DegenerateTriangle);
  }
}

TEST(TriangleProperties, SwapPreservesAreaAndNegatesNormal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a{c(rng), c(rng), c(rng)}, b{c(rng), c(rng), c(rng)}, d{c(rng), c(rng), c(rng)};
    const double area = triangle_area(a, b, d);
    ASSERT_GE(area, 0.0);
    EXPECT_NEAR(triangle_area(b, a, d), area, 1e-12 * std::max(1.0, area));
    const Vec3 n = triangle_normal(a, b, d);
    const Vec3 m = triangle_normal(b, a, d);
    EXPECT_NEAR(norm(n), 1.0, 1e-12);
    EXPECT_NEAR(n.x, -m.x, 1e-12);
    EXPECT_NEAR(n.y, -m.y, 1e-12);
    EXPECT_NEAR(n.z, -m.z, 1e-12);
  }
}

TEST(MeshBounds, UnitCube) {
  const Aabb b = mesh_bounds(unit_cube());
  EXPECT_EQ(b.min, (Vec3{0, 0, 0}));
  EXPECT_EQ(b.max, (Vec3{1, 1, 1}));
}

TEST(MeshBounds, SingleTriangle) {
  TriangleMesh m{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}, "tri"};
  const Aabb b = mesh_bounds(m);
  EXPECT_EQ(b.min, (Vec3{0, 0, 0}));
  EXPECT_EQ(b.max, (Vec3{1, 1, 0}));
}

TEST(MeshBounds, IgnoresUnreferencedVertices) {
  TriangleMesh m{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {100, 100, 100}}, {{0, 1, 2}}, "tri"};
  EXPECT_EQ(mesh_bounds(m).max, (Vec3{1, 1, 0}));
}

TEST(MeshBounds, RotatedCubeExtents) {
  // Rotating [0,1]^3 by 45 degrees about Z: the XY footprint becomes a
  // diamond of width sqrt(2) along both axes.
  const auto m = asbuilt::testing::rotated(unit_cube(), axis_angle({0, 0, 1}, 45.0));
  const Vec3 e = mesh_bounds(m).extents();
  EXPECT_NEAR(e.x, std::numbers::sqrt2, 1e-9);
  EXPECT_NEAR(e.y, std::numbers::sqrt2, 1e-9);
  EXPECT_NEAR(e.z, 1.0, 1e-9);
}

TEST(MeshBounds, TranslationEquivariantForIntegerShifts) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> shift(-1000, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    // Vertices on a 1/8 grid keep every sum exactly representable.
    TriangleMesh m = asbuilt::testing::random_mesh(rng, 200);
    for (Vec3& v : m.vertices) v = {std::round(v.x * 8) / 8, std::round(v.y * 8) / 8, std::round(v.z * 8) / 8};
    const Vec3 t{double(shift(rng)), double(shift(rng)), double(shift(rng))};
    const Aabb a = mesh_bounds(m);
    const Aabb b = mesh_bounds(asbuilt::testing::translated(m, t));
    EXPECT_EQ(b.min, a.min + t);
    EXPECT_EQ(b.max, a.max + t);
  }
}

TEST(ValidateMesh, CubeIsOk) {
  const ValidationReport r = validate_mesh(unit_cube());
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.degenerate_faces, 0u);
  EXPECT_EQ(r.face_count, 12u);
}

TEST(ValidateMesh, OutOfRangeIndex) {
  TriangleMesh m{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 99}}, "bad"};
  const ValidationReport r = validate_mesh(m);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.out_of_range_indices, 1u);
  EXPECT_THROW(require_valid(m), MeshError);
}

TEST(ValidateMesh, DegenerateFacesAreCountedNotFatal) {
  TriangleMesh m = unit_cube();
  m.vertices.push_back({5, 5, 5});
  m.faces.push_back({8, 8, 8});
  const ValidationReport r = validate_mesh(m);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.degenerate_faces, 1u);
}

TEST(ValidateMesh, NonFiniteAndTooSmall) {
  TriangleMesh m{{{0, 0, 0}, {1, 0, 0}, {0, std::nan(""), 0}}, {{0, 1, 2}}, "nan"};
  EXPECT_EQ(validate_mesh(m).non_finite_vertices, 1u);
  EXPECT_FALSE(validate_mesh(m).ok);
  EXPECT_FALSE(validate_mesh(TriangleMesh{}).ok);
  EXPECT_TRUE(validate_mesh(TriangleMesh{}).too_small);
}

}  // namespace
