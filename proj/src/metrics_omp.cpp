#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "asbuilt/metrics.hpp"
#include "kahan.hpp"

namespace asbuilt {

namespace {

constexpr std::int64_t kBlockFaces = 4096;

struct BlockSums {
  CompensatedSum area;
  CompensatedSum normal[3];
  std::size_t count = 0;
};

}  // namespace

SurfaceSums surface_sums(const TriangleMesh& mesh) {
  const auto& verts = mesh.vertices;
  const auto& faces = mesh.faces;
  const auto nfaces = std::int64_t(faces.size());
  const std::int64_t nblocks = (nfaces + kBlockFaces - 1) / kBlockFaces;
  std::vector<BlockSums> blocks(static_cast<std::size_t>(nblocks));

#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    BlockSums& acc = blocks[std::size_t(b)];
    const std::int64_t end = std::min(nfaces, (b + 1) * kBlockFaces);
    for (std::int64_t i = b * kBlockFaces; i < end; ++i) {
      const Face& f = faces[std::size_t(i)];
      const Vec3 c = cross(verts[f[1]] - verts[f[0]], verts[f[2]] - verts[f[0]]);
      const double area = 0.5 * norm(c);
      if (!(area > kDegenerateArea)) continue;
      // |unit normal_d| * area == |cross_d| / 2
      acc.area.add(area);
      acc.normal[0].add(0.5 * std::abs(c.x));
      acc.normal[1].add(0.5 * std::abs(c.y));
      acc.normal[2].add(0.5 * std::abs(c.z));
      ++acc.count;
    }
  }

  CompensatedSum area;
  CompensatedSum normal[3];
  SurfaceSums out;
  for (const BlockSums& blk : blocks) {
    area.add(blk.area.value());
    for (int d = 0; d < 3; ++d) normal[d].add(blk.normal[d].value());
    out.contributing_faces += blk.count;
  }
  out.area = area.value();
  for (int d = 0; d < 3; ++d) out.weighted_normal[std::size_t(d)] = normal[d].value();
  return out;
}

Aabb parallel_bounds(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) return {};
  const auto& verts = mesh.vertices;
  const auto& faces = mesh.faces;
  const auto nfaces = std::int64_t(faces.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo_x = inf, lo_y = inf, lo_z = inf;
  double hi_x = -inf, hi_y = -inf, hi_z = -inf;

#pragma omp parallel for schedule(static) reduction(min : lo_x, lo_y, lo_z) reduction(max : hi_x, hi_y, hi_z)
  for (std::int64_t i = 0; i < nfaces; ++i) {
    for (std::uint32_t idx : faces[std::size_t(i)]) {
      const Vec3& p = verts[idx];
      lo_x = std::min(lo_x, p.x);
      lo_y = std::min(lo_y, p.y);
      lo_z = std::min(lo_z, p.z);
      hi_x = std::max(hi_x, p.x);
      hi_y = std::max(hi_y, p.y);
      hi_z = std::max(hi_z, p.z);
    }
  }
  return {{lo_x, lo_y, lo_z}, {hi_x, hi_y, hi_z}};
}

double total_surface(const TriangleMesh& mesh) { return surface_sums(mesh).area; }

AxisTriple object_dimension(const TriangleMesh& mesh) {
  const Vec3 e = parallel_bounds(mesh).extents();
  return {e.x, e.y, e.z};
}

namespace {

AxisTriple normals_from(const SurfaceSums& s) {
  if (s.contributing_faces == 0) {
    throw MeshError(MeshErrc::AllDegenerate, "every face is degenerate; aggregated normals undefined");
  }
  AxisTriple out{};
  for (std::size_t d = 0; d < 3; ++d) out[d] = std::clamp(s.weighted_normal[d] / s.area, 0.0, 1.0);
  return out;
}

}  // namespace

AxisTriple aggregated_normals(const TriangleMesh& mesh) { return normals_from(surface_sums(mesh)); }

MacroMetrics compute_macro_metrics(const TriangleMesh& mesh) {
  require_valid(mesh);
  const SurfaceSums sums = surface_sums(mesh);
  MacroMetrics m;
  m.aggregated_normals = normals_from(sums);
  m.total_surface = sums.area;
  m.dimension = object_dimension(mesh);
  return m;
}

}  // namespace asbuilt
