// Copyright 2026 The scanrig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "geom/obj_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "common/error.hpp"

namespace scanrig {
namespace {

struct Corner {
  int v = -1;
  int vt = -1;
  int vn = -1;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throwInvalid(source + ":" + std::to_string(line) + ": " + what);
}

double parseReal(std::istringstream& ss, const std::string& source, int line) {
  std::string token;
  if (!(ss >> token)) {
    fail(source, line, "missing coordinate");
  }
  try {
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) {
      fail(source, line, "malformed number '" + token + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    fail(source, line, "malformed number '" + token + "'");
  }
}

// Resolves a 1-based (or negative, relative) OBJ index.
int resolveIndex(const std::string& text, int count, const std::string& what, const std::string& source,
                 int line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(source, line, "malformed " + what + " index '" + text + "'");
  }
  const int resolved = value > 0 ? value - 1 : count + value;
  if (value == 0 || resolved < 0 || resolved >= count) {
    fail(source, line, what + " index " + text + " out of range (have " + std::to_string(count) + ")");
  }
  return resolved;
}

Corner parseCorner(const std::string& token, int nv, int nvt, int nvn, const std::string& source, int line) {
  Corner c;
  std::string parts[3];
  int k = 0;
  for (char ch : token) {
    if (ch == '/') {
      if (++k > 2) {
        fail(source, line, "malformed face corner '" + token + "'");
      }
    } else {
      parts[k] += ch;
    }
  }
  c.v = resolveIndex(parts[0], nv, "face vertex", source, line);
  if (!parts[1].empty()) {
    c.vt = resolveIndex(parts[1], nvt, "texture", source, line);
  }
  if (!parts[2].empty()) {
    c.vn = resolveIndex(parts[2], nvn, "normal", source, line);
  }
  return c;
}

}  // namespace

Mesh readObj(std::istream& in, const std::string& source, DegenerateFacePolicy policy) {
  Points positions;
  std::vector<Vec2> texcoords;
  Points normals;
  std::vector<std::vector<Corner>> polygons;
  std::vector<int> polygon_lines;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::istringstream ss(raw);
    std::string tag;
    if (!(ss >> tag)) {
      continue;
    }
    if (tag == "v") {
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        p[k] = parseReal(ss, source, line);
      }
      positions.push_back(p);
    } else if (tag == "vt") {
      Vec2 t;
      for (int k = 0; k < 2; ++k) {
        t[k] = parseReal(ss, source, line);
      }
      texcoords.push_back(t);
    } else if (tag == "vn") {
      Vec3 n;
      for (int k = 0; k < 3; ++k) {
        n[k] = parseReal(ss, source, line);
      }
      normals.push_back(n);
    } else if (tag == "f") {
      std::vector<Corner> poly;
      std::string token;
      while (ss >> token) {
        poly.push_back(parseCorner(token, static_cast<int>(positions.size()),
                                   static_cast<int>(texcoords.size()), static_cast<int>(normals.size()),
                                   source, line));
      }
      if (poly.size() < 3) {
        fail(source, line, "face with fewer than 3 vertices");
      }
      polygons.push_back(std::move(poly));
      polygon_lines.push_back(line);
    }
    // Other records (o, g, s, usemtl, mtllib, ...) are ignored.
  }

  bool any_vt = false;
  bool any_vn = false;
  for (const auto& poly : polygons) {
    for (const auto& c : poly) {
      any_vt |= c.vt >= 0;
      any_vn |= c.vn >= 0;
    }
  }

  // Map (v, vt, vn) to output vertices; the first use of a position keeps
  // the original index so that meshes written by writeObj round-trip.
  Mesh mesh;
  mesh.vertices = positions;
  std::vector<Corner> owner(positions.size());
  std::vector<bool> claimed(positions.size(), false);
  std::map<std::tuple<int, int, int>, int> splits;
  std::vector<int> vt_of(positions.size(), -1);
  std::vector<int> vn_of(positions.size(), -1);

  auto vertexFor = [&](const Corner& c) -> int {
    if (!claimed[c.v]) {
      claimed[c.v] = true;
      vt_of[c.v] = c.vt;
      vn_of[c.v] = c.vn;
      return c.v;
    }
    if (vt_of[c.v] == c.vt && vn_of[c.v] == c.vn) {
      return c.v;
    }
    const auto key = std::make_tuple(c.v, c.vt, c.vn);
    if (auto it = splits.find(key); it != splits.end()) {
      return it->second;
    }
    const int idx = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(positions[c.v]);
    vt_of.push_back(c.vt);
    vn_of.push_back(c.vn);
    splits.emplace(key, idx);
    return idx;
  };

  std::vector<int> face_lines;
  for (size_t p = 0; p < polygons.size(); ++p) {
    const auto& poly = polygons[p];
    std::vector<int> ids;
    ids.reserve(poly.size());
    for (const auto& c : poly) {
      ids.push_back(vertexFor(c));
    }
    for (size_t k = 1; k + 1 < ids.size(); ++k) {
      mesh.faces.push_back({ids[0], ids[k], ids[k + 1]});
      face_lines.push_back(polygon_lines[p]);
    }
  }

  if (any_vt) {
    std::vector<Vec2> uvs(mesh.vertices.size(), Vec2::Zero());
    for (size_t i = 0; i < uvs.size(); ++i) {
      if (vt_of[i] >= 0) {
        uvs[i] = texcoords[vt_of[i]];
      }
    }
    mesh.uvs = std::move(uvs);
  }
  if (any_vn) {
    Points ns = areaWeightedNormals(mesh);
    for (size_t i = 0; i < ns.size(); ++i) {
      if (vn_of[i] >= 0) {
        const double len = normals[vn_of[i]].norm();
        if (len > 0.0) {
          ns[i] = normals[vn_of[i]] / len;
        }
      }
    }
    mesh.normals = std::move(ns);
  }

  // Face-level validation here so messages can name the source line.
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      fail(source, face_lines[fi], "face repeats a vertex index");
    }
  }
  try {
    return validateMesh(std::move(mesh), policy);
  } catch (const Error& e) {
    throwInvalid(source + ": " + e.what());
  }
}

Mesh loadObj(const std::string& path, DegenerateFacePolicy policy) {
  std::ifstream in(path);
  if (!in) {
    throwInvalid("cannot open OBJ file '" + path + "'");
  }
  return readObj(in, path, policy);
}

void writeObj(std::ostream& out, const Mesh& mesh) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  if (mesh.uvs) {
    for (const auto& t : *mesh.uvs) {
      std::snprintf(buf, sizeof(buf), "vt %.9g %.9g\n", t.x(), t.y());
      out << buf;
    }
  }
  if (mesh.normals) {
    for (const auto& n : *mesh.normals) {
      std::snprintf(buf, sizeof(buf), "vn %.9g %.9g %.9g\n", n.x(), n.y(), n.z());
      out << buf;
    }
  }
  const bool t = mesh.uvs.has_value();
  const bool n = mesh.normals.has_value();
  for (const auto& f : mesh.faces) {
    out << 'f';
    for (int k = 0; k < 3; ++k) {
      const int i = f[k] + 1;
      out << ' ' << i;
      if (t && n) {
        out << '/' << i << '/' << i;
      } else if (t) {
        out << '/' << i;
      } else if (n) {
        out << "//" << i;
      }
    }
    out << '\n';
  }
}

void saveObj(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) {
    throwInvalid("cannot write OBJ file '" + path + "'");
  }
  writeObj(out, mesh);
}

}  // namespace scanrig
