#include "asbuilt/metrics.hpp"
#include "kahan.hpp"

namespace asbuilt::reference {

double total_surface(const TriangleMesh& mesh) {
  CompensatedSum sum;
  for (const Face& f : mesh.faces) {
    const double a = triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    if (a > kDegenerateArea) sum.add(a);
  }
  return sum.value();
}

AxisTriple object_dimension(const TriangleMesh& mesh) {
  const Vec3 e = mesh_bounds(mesh).extents();
  return {e.x, e.y, e.z};
}

AxisTriple aggregated_normals(const TriangleMesh& mesh) {
  CompensatedSum area;
  CompensatedSum weighted[3];
  bool any = false;
  for (const Face& f : mesh.faces) {
    const Vec3& v0 = mesh.vertices[f[0]];
    const Vec3& v1 = mesh.vertices[f[1]];
    const Vec3& v2 = mesh.vertices[f[2]];
    const double a = triangle_area(v0, v1, v2);
    if (!(a > kDegenerateArea)) continue;
    const Vec3 n = triangle_normal(v0, v1, v2);
    area.add(a);
    weighted[0].add(std::abs(n.x) * a);
    weighted[1].add(std::abs(n.y) * a);
    weighted[2].add(std::abs(n.z) * a);
    any = true;
  }
  if (!any) throw MeshError(MeshErrc::AllDegenerate, "every face is degenerate; aggregated normals undefined");
  return {weighted[0].value() / area.value(), weighted[1].value() / area.value(), weighted[2].value() / area.value()};
}

MacroMetrics compute_macro_metrics(const TriangleMesh& mesh) {
  require_valid(mesh);
  MacroMetrics m;
  m.aggregated_normals = reference::aggregated_normals(mesh);
  m.total_surface = reference::total_surface(mesh);
  m.dimension = reference::object_dimension(mesh);
  return m;
}

}  // namespace asbuilt::reference
