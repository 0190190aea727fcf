#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asbuilt/mesh.hpp"

namespace asbuilt {

enum class MeshFormat { StlBinary, StlAscii, Obj };

const char* to_string(MeshFormat format);

/// Parses a complete file image. Triangle order follows the file; OBJ
/// polygons are fan-triangulated from their first vertex; file normals are
/// ignored. STL yields three vertices per facet (no welding).
TriangleMesh parse_mesh(std::span<const std::byte> bytes, MeshFormat format);
TriangleMesh parse_mesh(std::string_view text, MeshFormat format);

std::vector<std::byte> write_mesh(const TriangleMesh& mesh, MeshFormat format);

/// Binary vs ASCII STL, decided from the content.
MeshFormat detect_stl_format(std::span<const std::byte> bytes);

/// Format from the file extension (.stl / .obj) and, for STL, the content.
MeshFormat detect_format(const std::filesystem::path& path, std::span<const std::byte> bytes);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

/// read_file + detect_format + parse_mesh; the mesh name is the file stem.
TriangleMesh load_mesh(const std::filesystem::path& path);
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format);

}  // namespace asbuilt
