#include "asbuilt/mesh.hpp"

#include <algorithm>
#include <limits>

namespace asbuilt {

const char* to_string(MeshErrc code) {
  switch (code) {
    case MeshErrc::MalformedFile: return "MalformedFile";
    case MeshErrc::EmptyMesh: return "EmptyMesh";
    case MeshErrc::IndexOutOfRange: return "IndexOutOfRange";
    case MeshErrc::DegenerateTriangle: return "DegenerateTriangle";
    case MeshErrc::AllDegenerate: return "AllDegenerate";
    case MeshErrc::InvalidMesh: return "InvalidMesh";
  }
  return "Unknown";
}

double triangle_area(const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  return 0.5 * norm(cross(v1 - v0, v2 - v0));
}

Vec3 triangle_normal(const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  const Vec3 c = cross(v1 - v0, v2 - v0);
  const double len = norm(c);
  if (0.5 * len <= kDegenerateArea) {
    throw MeshError(MeshErrc::DegenerateTriangle, "triangle area below degeneracy epsilon");
  }
  return c * (1.0 / len);
}

Aabb mesh_bounds(const TriangleMesh& mesh) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Aabb box{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const Face& f : mesh.faces) {
    for (std::uint32_t idx : f) {
      const Vec3& p = mesh.vertices[idx];
      box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
      box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
    }
  }
  if (mesh.faces.empty()) box = Aabb{};
  return box;
}

ValidationReport validate_mesh(const TriangleMesh& mesh) {
  ValidationReport r;
  r.vertex_count = mesh.vertices.size();
  r.face_count = mesh.faces.size();
  r.too_small = mesh.faces.empty() || mesh.vertices.size() < 3;
  for (const Vec3& v : mesh.vertices) {
    if (!is_finite(v)) ++r.non_finite_vertices;
  }
  for (const Face& f : mesh.faces) {
    bool in_range = true;
    for (std::uint32_t idx : f) {
      if (idx >= mesh.vertices.size()) {
        ++r.out_of_range_indices;
        in_range = false;
      }
    }
    if (!in_range) continue;
    const auto& v = mesh.vertices;
    if (!(triangle_area(v[f[0]], v[f[1]], v[f[2]]) > kDegenerateArea)) ++r.degenerate_faces;
  }
  r.ok = !r.too_small && r.out_of_range_indices == 0 && r.non_finite_vertices == 0;
  return r;
}

void require_valid(const TriangleMesh& mesh) {
  const ValidationReport r = validate_mesh(mesh);
  if (!r.ok) {
    throw MeshError(MeshErrc::InvalidMesh,
                    "invalid mesh '" + mesh.name + "': " + std::to_string(r.out_of_range_indices) +
                        " out-of-range indices, " + std::to_string(r.non_finite_vertices) +
                        " non-finite vertices" + (r.too_small ? ", fewer than 1 face or 3 vertices" : ""));
  }
}

}  // namespace asbuilt
