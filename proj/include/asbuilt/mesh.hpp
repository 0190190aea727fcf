#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "asbuilt/vec3.hpp"

namespace asbuilt {

/// Triangles with area at or below this (mm^2) are degenerate: they stay in
/// the mesh but contribute nothing to metrics.
inline constexpr double kDegenerateArea = 1e-12;

enum class MeshErrc {
  MalformedFile,
  EmptyMesh,
  IndexOutOfRange,
  DegenerateTriangle,
  AllDegenerate,
  InvalidMesh,
};

const char* to_string(MeshErrc code);

class MeshError : public std::runtime_error {
 public:
  MeshError(MeshErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  MeshErrc code() const noexcept { return code_; }

 private:
  MeshErrc code_;
};

using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle soup; positions in millimeters. May hold invalid data
/// (validate_mesh reports on it); operations that need a valid mesh check.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::string name;
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 extents() const { return max - min; }
  double diagonal() const { return norm(extents()); }
};

struct ValidationReport {
  std::size_t vertex_count = 0;
  std::size_t face_count = 0;
  std::size_t degenerate_faces = 0;
  std::size_t out_of_range_indices = 0;
  std::size_t non_finite_vertices = 0;
  bool too_small = false;  // fewer than 1 face or 3 vertices
  bool ok = false;
};

double triangle_area(const Vec3& v0, const Vec3& v1, const Vec3& v2);

/// Unit normal along (v1-v0)x(v2-v0). Throws DegenerateTriangle when the
/// area is at or below kDegenerateArea.
Vec3 triangle_normal(const Vec3& v0, const Vec3& v1, const Vec3& v2);

/// Bounds over vertices referenced by at least one face.
Aabb mesh_bounds(const TriangleMesh& mesh);

ValidationReport validate_mesh(const TriangleMesh& mesh);

/// Throws MeshError(InvalidMesh) unless validate_mesh(mesh).ok.
void require_valid(const TriangleMesh& mesh);

}  // namespace asbuilt
