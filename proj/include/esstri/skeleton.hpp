#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "esstri/triangulation.hpp"

namespace esstri::tri {

/// Edge index within a tetrahedron: 0..5 for vertex pairs
/// 01, 02, 03, 12, 13, 23.
int edge_index(int a, int b);
std::array<int, 2> edge_vertices(int e);

/// Opposite-pair slot of the edge ab: {01,23} -> 0, {02,13} -> 1, {03,12} -> 2.
int slot_of(int a, int b);

/// An oriented edge a->b of one tetrahedron.
struct Corner {
  std::size_t tet = 0;
  int a = 0;
  int b = 1;

  friend bool operator==(const Corner&, const Corner&) = default;
  friend auto operator<=>(const Corner&, const Corner&) = default;
};

/// One step of orbit tracing around an edge: the corner together with the
/// two remaining vertices.  Tracing leaves through the face opposite d.
struct EdgeStep {
  std::size_t tet = 0;
  int a = 0, b = 1, c = 2, d = 3;
  friend bool operator==(const EdgeStep&, const EdgeStep&) = default;
};

struct EdgeClass {
  std::size_t index = 0;
  /// Cyclic sequence of corners in canonical form; consecutive corners are
  /// related by a face gluing.  The first corner's orientation defines the
  /// edge orientation.
  std::vector<Corner> corners;
  /// Tracing states matching corners (same order), used by moves and by
  /// the spine presentation.
  std::vector<EdgeStep> steps;
  bool boundary = false;
  /// False when tracing comes back to the start corner with a non-identity
  /// return map (edge identified with itself in reverse).
  bool valid = true;

  std::size_t degree() const { return corners.size(); }
};

struct FaceClass {
  std::size_t index = 0;
  /// One representative for boundary faces, otherwise two.  A face glued to
  /// another face of the same tetrahedron appears as two entries with the
  /// same tet.
  std::vector<FaceRef> reps;
};

enum class SurfaceKind { sphere, torus, klein_bottle, other };

struct VertexLink {
  std::size_t index = 0;
  std::size_t triangle_count = 0;
  std::size_t link_edge_count = 0;
  std::size_t link_vertex_count = 0;
  long euler_characteristic = 0;
  bool orientable = true;
  bool has_boundary = false;
  SurfaceKind kind = SurfaceKind::other;
  /// (tet, vertex) corner triangles making up the link, ascending.
  std::vector<std::array<std::size_t, 2>> triangles;

  /// Orientable genus for closed orientable links, cross-cap number for
  /// closed non-orientable ones, -1 with boundary.
  long genus() const;
};

enum class Classification { closed_manifold_1vertex, ideal_all_torus_or_klein, pseudo_manifold_other };

struct EdgeRef {
  std::size_t edge = 0;
  /// +1 when the tetrahedron edge a->b (a < b) agrees with the class
  /// orientation, -1 otherwise.
  int sign = 1;
};

struct Skeleton {
  std::size_t tet_count = 0;
  std::vector<EdgeClass> edges;
  std::vector<FaceClass> faces;
  std::vector<VertexLink> vertices;
  Classification classification = Classification::pseudo_manifold_other;

  /// edge_of[t][e] for tetrahedron edge index e (a < b direction).
  std::vector<std::array<EdgeRef, 6>> edge_of;
  /// face_of[t][f]: class index and which representative slot (0 or 1).
  std::vector<std::array<std::array<std::size_t, 2>, 4>> face_of;
  std::vector<std::array<std::size_t, 4>> vertex_of;

  std::size_t vertex_count() const { return vertices.size(); }
  /// V - E + F - T of the pseudo-manifold.
  long euler_characteristic() const;
  bool all_edges_valid() const;
};

/// Computes edge classes by orbit tracing, face classes, and vertex links.
/// Faces may be unglued (boundary mode); mutual-inverse violations throw.
Skeleton build_skeleton(const Triangulation& t);

/// Edge corners traced from (tet, a->b); used by tests for the identity
/// return-map property.  Returns the traced steps and whether the final
/// state equals the start state.
struct TraceResult {
  std::vector<EdgeStep> steps;
  bool returned_identity = false;
  bool hit_boundary = false;
};
TraceResult trace_edge(const Triangulation& t, std::size_t tet, int a, int b);

/// Brings a corner cycle to canonical form: start at the least corner with
/// ascending orientation, direction making the second corner least.
std::vector<Corner> canonical_cycle(std::vector<Corner> cycle);

/// True when the two cycles agree up to rotation, reversal of direction,
/// and global flip of the edge orientation.
bool same_cycle(const std::vector<Corner>& x, const std::vector<Corner>& y);

std::string to_string(SurfaceKind k);
std::string to_string(Classification c);

}  // namespace esstri::tri
