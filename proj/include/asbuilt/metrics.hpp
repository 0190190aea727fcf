#pragma once

#include <array>

#include "asbuilt/mesh.hpp"

namespace asbuilt {

using AxisTriple = std::array<double, 3>;

/// Macro-level parameters of one mesh, in its authored frame.
struct MacroMetrics {
  double total_surface = 0.0;   // mm^2
  AxisTriple dimension{};       // mm, X/Y/Z extent
  AxisTriple aggregated_normals{};  // area-weighted |unit normal| per axis, each in [0,1]

  friend bool operator==(const MacroMetrics&, const MacroMetrics&) = default;
};

/// Area and area-weighted |normal| sums over non-degenerate faces.
struct SurfaceSums {
  double area = 0.0;
  AxisTriple weighted_normal{};
  std::size_t contributing_faces = 0;
};

// Parallel kernels (OpenMP). Results do not depend on the thread count: faces
// are reduced in fixed-size blocks with compensated sums, and the block
// partials are combined in block order.
SurfaceSums surface_sums(const TriangleMesh& mesh);
Aabb parallel_bounds(const TriangleMesh& mesh);

double total_surface(const TriangleMesh& mesh);
AxisTriple object_dimension(const TriangleMesh& mesh);
/// Throws MeshError(AllDegenerate) when no face has area above kDegenerateArea.
AxisTriple aggregated_normals(const TriangleMesh& mesh);
/// Validates the mesh, then evaluates all three parameters in one pass.
MacroMetrics compute_macro_metrics(const TriangleMesh& mesh);

/// Straightforward single-threaded implementation, built on triangle_area,
/// triangle_normal and mesh_bounds. Kept as the test and benchmark baseline.
namespace reference {
double total_surface(const TriangleMesh& mesh);
AxisTriple object_dimension(const TriangleMesh& mesh);
AxisTriple aggregated_normals(const TriangleMesh& mesh);
MacroMetrics compute_macro_metrics(const TriangleMesh& mesh);
}  // namespace reference

}  // namespace asbuilt
