#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "surftrack/image.hpp"

namespace surftrack {

// Static reference shape of the tracked object. Immutable after load;
// safe for shared read access from any number of workers.
struct TemplateMesh {
  Eigen::MatrixX3d vertices;      // rest positions, one row per vertex
  Eigen::MatrixX3i faces;         // triangles, vertex indices
  Eigen::MatrixX2d uvs;           // texture coordinates, pixel units
  ImageRGB texture;
  std::vector<std::vector<int>> adjacency;     // sorted neighbor indices
  Eigen::MatrixX3d vertex_colors;              // RGB in [0,255]
  std::vector<std::pair<int, int>> edges;      // directed (i,j), lexicographic
  std::vector<double> rest_edge_lengths;       // aligned with edges

  int vertex_count() const { return (int)vertices.rows(); }
  int face_count() const { return (int)faces.rows(); }
};

// Reads a triangulated OBJ with per-vertex UVs plus its texture image and
// returns a fully indexed template (adjacency, vertex colors, rest edge
// lengths). OBJ texture coordinates are mapped from the usual normalized
// v-up convention to pixel units with v down:
//   u_px = u * (tex_width - 1),  v_px = (1 - v) * (tex_height - 1).
TemplateMesh load_template(const std::string& mesh_path,
                           const std::string& texture_path);

// Builds adjacency, directed edges, rest lengths, and vertex colors for a
// mesh whose vertices/faces/uvs/texture are already populated, validating
// the same invariants as load_template.
void finalize_template(TemplateMesh* mesh);

// Nearest-neighbor lookup in the texture map at each vertex's UV position,
// clamped to the nearest valid pixel.
Eigen::MatrixX3d compute_vertex_colors(const ImageRGB& texture,
                                       const Eigen::MatrixX2d& uvs);

// Weights w with p = w0*a + w1*b + w2*c and w0+w1+w2 = 1. Weights may lie
// outside [0,1] for points outside the triangle. Throws for triangles with
// area below 1e-12 * (longest edge)^2, reporting the area.
Eigen::Vector3d barycentric_of_point(const Eigen::Vector2d& p,
                                     const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b,
                                     const Eigen::Vector2d& c);

// Writes vertices with the template's faces and UVs (mapped back to the
// normalized OBJ convention). Coordinates use enough digits to round-trip
// doubles exactly.
void save_obj(const std::string& path, const TemplateMesh& topology,
              const Eigen::MatrixX3d& vertices);

// Vertex positions only; used when re-reading tracked results.
Eigen::MatrixX3d load_obj_positions(const std::string& path);

}  // namespace surftrack
