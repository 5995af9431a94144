#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "esstri/skeleton.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::moves {

using tri::Perm4;
using tri::Triangulation;

class MoveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MoveKind { two_three, three_two, zero_two };

struct MoveRecord {
  MoveKind kind = MoveKind::two_three;
  /// Face class (2-3) or edge class (3-2, 0-2) of the input.
  std::size_t site = 0;
  /// Output indices of the appended tetrahedra.
  std::vector<std::size_t> created_tets;
  /// Output edge classes created by the move: the degree-3 edge for 2-3;
  /// for 0-2 the degree-2 edge followed by the two halves of the split edge.
  std::vector<std::size_t> created_edges;
  /// Input tet -> output tet, nullopt for removed tetrahedra.
  std::vector<std::optional<std::size_t>> tet_map;
  /// Vertex relabeling applied to each output tet when restoring the
  /// orientation of an oriented input (identity otherwise).
  std::vector<Perm4> relabel;
};

struct MoveResult {
  Triangulation tri;
  MoveRecord record;
  /// Transported taut structure (slot index carrying π per output tet).
  std::optional<std::vector<int>> taut;
};

/// Replaces the two tetrahedra on either side of face class `face_class`
/// by three tetrahedra around a new degree-3 edge.
MoveResult pachner_2_3(const Triangulation& t, std::size_t face_class);

/// Inverse of pachner_2_3: edge class of degree 3 with three distinct
/// tetrahedra is replaced by two tetrahedra.
MoveResult pachner_3_2(const Triangulation& t, std::size_t edge_class);

/// Selects the two faces of the edge cycle to open: face k lies between
/// cycle positions k and k+1 (mod degree).
struct PillowSite {
  std::size_t first = 0;
  std::size_t second = 1;
};

/// Opens edge class `edge_class` along the two chosen faces and inserts a
/// two-tetrahedron pillow with a degree-2 edge.  When `taut` is given (one
/// π slot per input tet) it is extended over the pillow; this requires the
/// two π corners at the edge to lie on opposite sides of the chosen faces.
MoveResult pillow_0_2(const Triangulation& t, std::size_t edge_class, PillowSite site,
                      const std::optional<std::vector<int>>& taut = std::nullopt);

/// All pillow sites of an edge class (unordered pairs of distinct face
/// positions opening two different face classes).
std::vector<PillowSite> pillow_sites(const Triangulation& t, std::size_t edge_class);

/// True when the π corners of a taut structure at the edge lie one in each
/// sector cut out by the two faces.
bool taut_extends(const Triangulation& t, std::size_t edge_class, PillowSite site, const std::vector<int>& taut);

}  // namespace esstri::moves
