#include "surftrack/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "surftrack/image_io.hpp"

namespace surftrack {

namespace {

struct ObjData {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector2d> texcoords;              // normalized, v up
  std::vector<std::array<int, 3>> face_vertices;       // 0-based
  std::vector<std::array<int, 3>> face_texcoords;      // 0-based, -1 if absent
};

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error("obj parse error (" + path + ":" + std::to_string(line) +
                           "): " + what);
}

// OBJ indices are 1-based; negative values count back from the end.
int resolve_index(int idx, int count, const std::string& path, int line) {
  int r = idx > 0 ? idx - 1 : count + idx;
  if (idx == 0 || r < 0 || r >= count)
    parse_fail(path, line, "index out of range: " + std::to_string(idx));
  return r;
}

ObjData parse_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("obj parse error: cannot open file: " + path);

  ObjData obj;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag.empty() || tag[0] == '#') continue;

    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) parse_fail(path, lineno, "malformed vertex");
      obj.positions.push_back(p);
    } else if (tag == "vt") {
      Eigen::Vector2d t;
      if (!(ss >> t.x() >> t.y())) parse_fail(path, lineno, "malformed texture coordinate");
      obj.texcoords.push_back(t);
    } else if (tag == "f") {
      std::vector<int> vi, ti;
      std::string corner;
      while (ss >> corner) {
        int v = 0, t = 0;
        bool has_t = false;
        try {
          size_t s1 = corner.find('/');
          if (s1 == std::string::npos) {
            v = std::stoi(corner);
          } else {
            v = std::stoi(corner.substr(0, s1));
            size_t s2 = corner.find('/', s1 + 1);
            std::string tpart = s2 == std::string::npos
                                    ? corner.substr(s1 + 1)
                                    : corner.substr(s1 + 1, s2 - s1 - 1);
            if (!tpart.empty()) {
              t = std::stoi(tpart);
              has_t = true;
            }
          }
        } catch (const std::logic_error&) {
          parse_fail(path, lineno, "malformed face corner '" + corner + "'");
        }
        vi.push_back(resolve_index(v, (int)obj.positions.size(), path, lineno));
        ti.push_back(has_t ? resolve_index(t, (int)obj.texcoords.size(), path, lineno) : -1);
      }
      if (vi.size() != 3)
        parse_fail(path, lineno, "non-triangulated face with " +
                                     std::to_string(vi.size()) + " corners");
      obj.face_vertices.push_back({vi[0], vi[1], vi[2]});
      obj.face_texcoords.push_back({ti[0], ti[1], ti[2]});
    }
  }
  if (obj.positions.empty()) throw std::runtime_error("obj parse error: no vertices in " + path);
  if (obj.face_vertices.empty()) throw std::runtime_error("obj parse error: no faces in " + path);
  return obj;
}

}  // namespace

Eigen::MatrixX3d compute_vertex_colors(const ImageRGB& texture,
                                       const Eigen::MatrixX2d& uvs) {
  Eigen::MatrixX3d colors(uvs.rows(), 3);
  for (int i = 0; i < uvs.rows(); ++i) {
    int x = std::clamp((int)std::lround(uvs(i, 0)), 0, texture.width - 1);
    int y = std::clamp((int)std::lround(uvs(i, 1)), 0, texture.height - 1);
    colors.row(i) = texture.rgb(x, y).transpose();
  }
  return colors;
}

Eigen::Vector3d barycentric_of_point(const Eigen::Vector2d& p,
                                     const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b,
                                     const Eigen::Vector2d& c) {
  const Eigen::Vector2d e1 = b - a, e2 = c - a;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  const double area = 0.5 * std::abs(det);
  const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  if (area < 1e-12 * longest * longest)
    throw std::runtime_error("barycentric_of_point: degenerate triangle, area = " +
                             std::to_string(area));
  const Eigen::Vector2d d = p - a;
  const double w1 = (d.x() * e2.y() - d.y() * e2.x()) / det;
  const double w2 = (e1.x() * d.y() - e1.y() * d.x()) / det;
  return {1.0 - w1 - w2, w1, w2};
}

void finalize_template(TemplateMesh* mesh) {
  const int n = mesh->vertex_count();
  const int f = mesh->face_count();
  if (n < 3 || f < 1) throw std::runtime_error("template mesh: needs >= 3 vertices and >= 1 face");
  if (mesh->texture.empty()) throw std::runtime_error("template mesh: missing texture");
  if (mesh->uvs.rows() != n) throw std::runtime_error("template mesh: uv count mismatch");

  std::vector<std::set<int>> nbr(n);
  for (int t = 0; t < f; ++t) {
    const int i = mesh->faces(t, 0), j = mesh->faces(t, 1), k = mesh->faces(t, 2);
    for (int idx : {i, j, k})
      if (idx < 0 || idx >= n)
        throw std::runtime_error("template mesh: face " + std::to_string(t) +
                                 " has out-of-range vertex index " + std::to_string(idx));
    if (i == j || j == k || i == k)
      throw std::runtime_error("template mesh: degenerate face " + std::to_string(t) +
                               " with repeated vertex index");
    nbr[i].insert(j); nbr[i].insert(k);
    nbr[j].insert(i); nbr[j].insert(k);
    nbr[k].insert(i); nbr[k].insert(j);
  }

  mesh->adjacency.assign(n, {});
  mesh->edges.clear();
  mesh->rest_edge_lengths.clear();
  for (int i = 0; i < n; ++i) {
    mesh->adjacency[i].assign(nbr[i].begin(), nbr[i].end());
    for (int j : mesh->adjacency[i]) {
      const double len = (mesh->vertices.row(i) - mesh->vertices.row(j)).norm();
      if (!(len > 0.0))
        throw std::runtime_error("template mesh: zero-length edge between vertices " +
                                 std::to_string(i) + " and " + std::to_string(j));
      mesh->edges.emplace_back(i, j);
      mesh->rest_edge_lengths.push_back(len);
    }
  }

  for (int i = 0; i < n; ++i) {
    if (mesh->uvs(i, 0) < 0 || mesh->uvs(i, 0) > mesh->texture.width - 1 ||
        mesh->uvs(i, 1) < 0 || mesh->uvs(i, 1) > mesh->texture.height - 1)
      throw std::runtime_error("template mesh: uv of vertex " + std::to_string(i) +
                               " outside the texture bounds");
  }
  mesh->vertex_colors = compute_vertex_colors(mesh->texture, mesh->uvs);
}

TemplateMesh load_template(const std::string& mesh_path,
                           const std::string& texture_path) {
  ObjData obj = parse_obj(mesh_path);
  TemplateMesh mesh;
  mesh.texture = load_image(texture_path);

  const int n = (int)obj.positions.size();
  mesh.vertices.resize(n, 3);
  for (int i = 0; i < n; ++i) mesh.vertices.row(i) = obj.positions[i].transpose();

  mesh.faces.resize((int)obj.face_vertices.size(), 3);
  for (int t = 0; t < (int)obj.face_vertices.size(); ++t)
    for (int c = 0; c < 3; ++c) mesh.faces(t, c) = obj.face_vertices[t][c];

  // Per-vertex UV: the first texture coordinate seen for each vertex wins.
  std::vector<int> vt_of_vertex(n, -1);
  for (size_t t = 0; t < obj.face_vertices.size(); ++t)
    for (int c = 0; c < 3; ++c) {
      const int v = obj.face_vertices[t][c];
      const int vt = obj.face_texcoords[t][c];
      if (vt < 0)
        throw std::runtime_error("obj parse error: face " + std::to_string(t + 1) +
                                 " in " + mesh_path + " is missing UV references");
      if (vt_of_vertex[v] < 0) vt_of_vertex[v] = vt;
    }

  const double su = std::max(1, mesh.texture.width - 1);
  const double sv = std::max(1, mesh.texture.height - 1);
  mesh.uvs.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d t = vt_of_vertex[i] >= 0 ? obj.texcoords[vt_of_vertex[i]]
                                             : Eigen::Vector2d(0, 1);
    mesh.uvs(i, 0) = std::clamp(t.x(), 0.0, 1.0) * su;
    mesh.uvs(i, 1) = (1.0 - std::clamp(t.y(), 0.0, 1.0)) * sv;
  }

  finalize_template(&mesh);
  return mesh;
}

void save_obj(const std::string& path, const TemplateMesh& topology,
              const Eigen::MatrixX3d& vertices) {
  if (vertices.rows() != topology.vertices.rows())
    throw std::runtime_error("save_obj: vertex count does not match the template");
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("save_obj: cannot open for writing: " + path);

  const double su = std::max(1, topology.texture.width - 1);
  const double sv = std::max(1, topology.texture.height - 1);
  for (int i = 0; i < vertices.rows(); ++i)
    std::fprintf(fp, "v %.17g %.17g %.17g\n", vertices(i, 0), vertices(i, 1), vertices(i, 2));
  for (int i = 0; i < topology.uvs.rows(); ++i)
    std::fprintf(fp, "vt %.17g %.17g\n", topology.uvs(i, 0) / su,
                 1.0 - topology.uvs(i, 1) / sv);
  for (int t = 0; t < topology.face_count(); ++t)
    std::fprintf(fp, "f %d/%d %d/%d %d/%d\n",
                 topology.faces(t, 0) + 1, topology.faces(t, 0) + 1,
                 topology.faces(t, 1) + 1, topology.faces(t, 1) + 1,
                 topology.faces(t, 2) + 1, topology.faces(t, 2) + 1);
  std::fclose(fp);
}

Eigen::MatrixX3d load_obj_positions(const std::string& path) {
  ObjData obj = parse_obj(path);
  Eigen::MatrixX3d v((int)obj.positions.size(), 3);
  for (int i = 0; i < v.rows(); ++i) v.row(i) = obj.positions[i].transpose();
  return v;
}

}  // namespace surftrack
