#include "asbuilt/mesh_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>

namespace asbuilt {

namespace {

constexpr std::size_t kStlHeaderBytes = 80;
constexpr std::size_t kStlFacetBytes = 50;

[[noreturn]] void malformed(const std::string& what) { throw MeshError(MeshErrc::MalformedFile, what); }

std::uint32_t read_u32le(const std::byte* p) {
  return std::uint32_t(std::to_integer<std::uint8_t>(p[0])) |
         (std::uint32_t(std::to_integer<std::uint8_t>(p[1])) << 8) |
         (std::uint32_t(std::to_integer<std::uint8_t>(p[2])) << 16) |
         (std::uint32_t(std::to_integer<std::uint8_t>(p[3])) << 24);
}

float read_f32le(const std::byte* p) { return std::bit_cast<float>(read_u32le(p)); }

void put_u32le(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xffu));
}

void put_f32le(std::vector<std::byte>& out, float f) { put_u32le(out, std::bit_cast<std::uint32_t>(f)); }

std::string_view as_text(std::span<const std::byte> bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::span<const std::byte> as_bytes(std::string_view text) {
  return {reinterpret_cast<const std::byte*>(text.data()), text.size()};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

// Splits off the next whitespace-delimited token from `s`.
std::string_view next_token(std::string_view& s) {
  s = trim(s);
  const auto end = s.find_first_of(" \t\r\f\v");
  std::string_view tok = s.substr(0, end);
  s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
  return tok;
}

double parse_real(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
    malformed("line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  if (!std::isfinite(value)) malformed("line " + std::to_string(line) + ": non-finite coordinate");
  return value;
}

Vec3 parse_vec3(std::string_view& rest, std::size_t line) {
  Vec3 v;
  v.x = parse_real(next_token(rest), line);
  v.y = parse_real(next_token(rest), line);
  v.z = parse_real(next_token(rest), line);
  return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    fn(line, ++line_no);
  }
}

void finish(TriangleMesh& mesh) {
  if (mesh.faces.empty()) throw MeshError(MeshErrc::EmptyMesh, "mesh has no faces");
  if (mesh.vertices.size() < 3) malformed("mesh has fewer than 3 vertices");
}

TriangleMesh parse_stl_binary(std::span<const std::byte> bytes) {
  if (bytes.size() < kStlHeaderBytes + 4) malformed("binary STL shorter than its 84-byte header");
  const std::uint32_t count = read_u32le(bytes.data() + kStlHeaderBytes);
  const std::size_t need = kStlHeaderBytes + 4 + std::size_t(count) * kStlFacetBytes;
  if (bytes.size() < need) {
    malformed("binary STL truncated: header declares " + std::to_string(count) + " facets, needs " +
              std::to_string(need) + " bytes, have " + std::to_string(bytes.size()));
  }
  TriangleMesh mesh;
  mesh.vertices.reserve(std::size_t(count) * 3);
  mesh.faces.reserve(count);
  const std::byte* p = bytes.data() + kStlHeaderBytes + 4;
  for (std::uint32_t i = 0; i < count; ++i, p += kStlFacetBytes) {
    const auto base = std::uint32_t(mesh.vertices.size());
    for (int k = 0; k < 3; ++k) {
      const std::byte* q = p + 12 + 12 * k;  // skip the stored normal
      Vec3 v{read_f32le(q), read_f32le(q + 4), read_f32le(q + 8)};
      if (!is_finite(v)) malformed("binary STL facet " + std::to_string(i) + ": non-finite coordinate");
      mesh.vertices.push_back(v);
    }
    mesh.faces.push_back({base, base + 1, base + 2});
  }
  finish(mesh);
  return mesh;
}

TriangleMesh parse_stl_ascii(std::string_view text) {
  enum class State { Start, Solid, Facet, Loop, EndLoop, EndFacet, Done };
  State state = State::Start;
  TriangleMesh mesh;
  int loop_vertices = 0;

  for_each_line(text, [&](std::string_view line, std::size_t no) {
    std::string_view rest = line;
    const std::string_view kw = next_token(rest);
    if (kw.empty()) return;
    auto expect = [&](bool cond, const char* what) {
      if (!cond) malformed("ASCII STL line " + std::to_string(no) + ": " + what);
    };
    switch (state) {
      case State::Start:
        expect(kw == "solid", "expected 'solid'");
        mesh.name = std::string(trim(rest));
        state = State::Solid;
        break;
      case State::Solid:
        if (kw == "endsolid") {
          state = State::Done;
          break;
        }
        expect(kw == "facet", "expected 'facet' or 'endsolid'");
        expect(next_token(rest) == "normal", "expected 'facet normal'");
        parse_vec3(rest, no);
        state = State::Facet;
        break;
      case State::Facet:
        expect(kw == "outer" && next_token(rest) == "loop", "expected 'outer loop'");
        loop_vertices = 0;
        state = State::Loop;
        break;
      case State::Loop:
        expect(kw == "vertex", "expected 'vertex'");
        mesh.vertices.push_back(parse_vec3(rest, no));
        if (++loop_vertices == 3) state = State::EndLoop;
        break;
      case State::EndLoop:
        expect(kw == "endloop", "expected 'endloop' after three vertices");
        state = State::EndFacet;
        break;
      case State::EndFacet: {
        expect(kw == "endfacet", "expected 'endfacet'");
        const auto base = std::uint32_t(mesh.vertices.size() - 3);
        mesh.faces.push_back({base, base + 1, base + 2});
        state = State::Solid;
        break;
      }
      case State::Done:
        malformed("ASCII STL line " + std::to_string(no) + ": content after 'endsolid'");
    }
  });
  if (state == State::Start) malformed("ASCII STL: empty input");
  if (state != State::Done) malformed("ASCII STL truncated before 'endsolid'");
  finish(mesh);
  return mesh;
}

TriangleMesh parse_obj(std::string_view text) {
  TriangleMesh mesh;
  std::vector<std::int64_t> poly;
  std::vector<std::int64_t> raw_faces;  // flattened triangles, 1-based or resolved-negative

  for_each_line(text, [&](std::string_view line, std::size_t no) {
    std::string_view rest = line;
    const std::string_view kw = next_token(rest);
    if (kw == "v") {
      mesh.vertices.push_back(parse_vec3(rest, no));
    } else if (kw == "f") {
      poly.clear();
      for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
        const std::string_view idx_text = tok.substr(0, tok.find('/'));
        std::int64_t idx = 0;
        const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
        if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size() || idx == 0) {
          malformed("OBJ line " + std::to_string(no) + ": bad face index '" + std::string(tok) + "'");
        }
        if (idx < 0) {
          idx += std::int64_t(mesh.vertices.size()) + 1;
          if (idx < 1) {
            throw MeshError(MeshErrc::IndexOutOfRange,
                            "OBJ line " + std::to_string(no) + ": relative index before first vertex");
          }
        }
        poly.push_back(idx);
      }
      if (poly.size() < 3) malformed("OBJ line " + std::to_string(no) + ": face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        raw_faces.insert(raw_faces.end(), {poly[0], poly[k], poly[k + 1]});
      }
    } else if (kw == "o" && mesh.name.empty()) {
      mesh.name = std::string(trim(rest));
    }
  });

  const auto nverts = std::int64_t(mesh.vertices.size());
  mesh.faces.reserve(raw_faces.size() / 3);
  for (std::size_t i = 0; i < raw_faces.size(); i += 3) {
    Face f{};
    for (int k = 0; k < 3; ++k) {
      const std::int64_t idx = raw_faces[i + k];
      if (idx > nverts) {
        throw MeshError(MeshErrc::IndexOutOfRange, "OBJ face references vertex " + std::to_string(idx) +
                                                       " but only " + std::to_string(nverts) + " exist");
      }
      f[k] = std::uint32_t(idx - 1);
    }
    mesh.faces.push_back(f);
  }
  finish(mesh);
  return mesh;
}

void append_real(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void append_vec3(std::string& out, const Vec3& v) {
  append_real(out, v.x);
  out += ' ';
  append_real(out, v.y);
  out += ' ';
  append_real(out, v.z);
}

Vec3 facet_normal(const TriangleMesh& m, const Face& f) {
  const Vec3 c = cross(m.vertices[f[1]] - m.vertices[f[0]], m.vertices[f[2]] - m.vertices[f[0]]);
  const double len = norm(c);
  return 0.5 * len > kDegenerateArea ? c * (1.0 / len) : Vec3{};
}

std::vector<std::byte> to_bytes(const std::string& s) {
  const auto b = as_bytes(s);
  return {b.begin(), b.end()};
}

std::vector<std::byte> write_stl_binary(const TriangleMesh& mesh) {
  std::vector<std::byte> out;
  out.reserve(kStlHeaderBytes + 4 + mesh.faces.size() * kStlFacetBytes);
  std::string header = "binary STL " + mesh.name;
  header.resize(kStlHeaderBytes, '\0');
  for (char c : header) out.push_back(std::byte(c));
  put_u32le(out, std::uint32_t(mesh.faces.size()));
  for (const Face& f : mesh.faces) {
    const Vec3 n = facet_normal(mesh, f);
    put_f32le(out, float(n.x));
    put_f32le(out, float(n.y));
    put_f32le(out, float(n.z));
    for (std::uint32_t idx : f) {
      const Vec3& v = mesh.vertices[idx];
      put_f32le(out, float(v.x));
      put_f32le(out, float(v.y));
      put_f32le(out, float(v.z));
    }
    out.push_back(std::byte{0});
    out.push_back(std::byte{0});
  }
  return out;
}

std::vector<std::byte> write_stl_ascii(const TriangleMesh& mesh) {
  std::string out = "solid " + mesh.name + "\n";
  for (const Face& f : mesh.faces) {
    out += "  facet normal ";
    append_vec3(out, facet_normal(mesh, f));
    out += "\n    outer loop\n";
    for (std::uint32_t idx : f) {
      out += "      vertex ";
      append_vec3(out, mesh.vertices[idx]);
      out += '\n';
    }
    out += "    endloop\n  endfacet\n";
  }
  out += "endsolid " + mesh.name + "\n";
  return to_bytes(out);
}

std::vector<std::byte> write_obj(const TriangleMesh& mesh) {
  std::string out;
  if (!mesh.name.empty()) out += "o " + mesh.name + "\n";
  for (const Vec3& v : mesh.vertices) {
    out += "v ";
    append_vec3(out, v);
    out += '\n';
  }
  for (const Face& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' + std::to_string(f[2] + 1) + '\n';
  }
  return to_bytes(out);
}

}  // namespace

const char* to_string(MeshFormat format) {
  switch (format) {
    case MeshFormat::StlBinary: return "stl-binary";
    case MeshFormat::StlAscii: return "stl-ascii";
    case MeshFormat::Obj: return "obj";
  }
  return "unknown";
}

TriangleMesh parse_mesh(std::span<const std::byte> bytes, MeshFormat format) {
  switch (format) {
    case MeshFormat::StlBinary: return parse_stl_binary(bytes);
    case MeshFormat::StlAscii: return parse_stl_ascii(as_text(bytes));
    case MeshFormat::Obj: return parse_obj(as_text(bytes));
  }
  malformed("unknown mesh format");
}

TriangleMesh parse_mesh(std::string_view text, MeshFormat format) { return parse_mesh(as_bytes(text), format); }

std::vector<std::byte> write_mesh(const TriangleMesh& mesh, MeshFormat format) {
  switch (format) {
    case MeshFormat::StlBinary: return write_stl_binary(mesh);
    case MeshFormat::StlAscii: return write_stl_ascii(mesh);
    case MeshFormat::Obj: return write_obj(mesh);
  }
  return {};
}

MeshFormat detect_stl_format(std::span<const std::byte> bytes) {
  if (bytes.size() >= kStlHeaderBytes + 4) {
    const std::uint32_t count = read_u32le(bytes.data() + kStlHeaderBytes);
    if (kStlHeaderBytes + 4 + std::size_t(count) * kStlFacetBytes == bytes.size()) return MeshFormat::StlBinary;
  }
  const std::string_view text = trim(as_text(bytes).substr(0, 512));
  if (text.starts_with("solid")) return MeshFormat::StlAscii;
  return MeshFormat::StlBinary;
}

MeshFormat detect_format(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".stl") return detect_stl_format(bytes);
  malformed("cannot infer mesh format from extension '" + ext + "' (expected .stl or .obj)");
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(buf.size());
  std::memcpy(out.data(), buf.data(), buf.size());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  TriangleMesh mesh = parse_mesh(bytes, detect_format(path, bytes));
  mesh.name = path.stem().string();
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  const auto bytes = read_file(path);
  TriangleMesh mesh = parse_mesh(bytes, format);
  mesh.name = path.stem().string();
  return mesh;
}

}  // namespace asbuilt
