#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esstri/perm4.hpp"

namespace esstri::tri {

/// Face f of a tetrahedron is the face opposite vertex f.
struct Gluing {
  std::size_t tet = 0;
  Perm4 perm;

  friend bool operator==(const Gluing&, const Gluing&) = default;
};

struct FaceRef {
  std::size_t tet = 0;
  int face = 0;

  friend bool operator==(const FaceRef&, const FaceRef&) = default;
  friend auto operator<=>(const FaceRef&, const FaceRef&) = default;
};

class TriangulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tetrahedra with face pairings.  Each face carries an optional gluing;
/// an absent gluing is a boundary face.
class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::size_t tet_count) : faces_(tet_count) {}

  std::size_t size() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  const std::optional<Gluing>& gluing(std::size_t tet, int face) const {
    return faces_.at(tet).at(static_cast<std::size_t>(face));
  }

  /// Glue (tet, face) to tet2 by perm, setting both directions.
  void glue(std::size_t tet, int face, std::size_t tet2, Perm4 perm);

  /// Remove the gluing on (tet, face) and on its partner, if any.
  void unglue(std::size_t tet, int face);

  /// Set one side only; the partner face is not touched.  Used by parsers
  /// and to build deliberately inconsistent data.
  void set_one_side(std::size_t tet, int face, std::optional<Gluing> g) {
    faces_.at(tet).at(static_cast<std::size_t>(face)) = g;
  }

  /// Appends k unglued tetrahedra and returns the index of the first.
  std::size_t add_tets(std::size_t k);

  /// Relabels the vertices of one tetrahedron by p (old vertex v becomes
  /// p[v]); all gluings touching it are rewritten accordingly.
  void relabel_tet(std::size_t tet, Perm4 p);

  bool is_closed() const;
  std::size_t boundary_face_count() const;

  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  friend bool operator==(const Triangulation& a, const Triangulation& b) {
    return a.faces_ == b.faces_;
  }

 private:
  std::vector<std::array<std::optional<Gluing>, 4>> faces_;
  std::string label_;
};

enum class ViolationKind { target_out_of_range, mutual_inverse, self_identified_face, unglued_face };

struct Violation {
  ViolationKind kind;
  FaceRef where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

enum class GlueMode { closed, boundary };

/// Lists every broken invariant.  In boundary mode unglued faces are
/// accepted.
ValidationReport validate(const Triangulation& t, GlueMode mode = GlueMode::closed);

/// Throws TriangulationError carrying the first violation.
void require_valid(const Triangulation& t, GlueMode mode = GlueMode::closed);

/// Tetrahedron t of the source is sent to tet_map[t] with its vertices
/// relabeled by vertex_maps[t].
struct Isomorphism {
  std::vector<std::size_t> tet_map;
  std::vector<Perm4> vertex_maps;
};

std::optional<Isomorphism> are_isomorphic(const Triangulation& a, const Triangulation& b);

/// Checks that iso commutes with every gluing of a and b.
bool is_isomorphism(const Triangulation& a, const Triangulation& b, const Isomorphism& iso);

/// Applies a tetrahedron relabeling and per-tet vertex relabeling.
Triangulation apply_isomorphism(const Triangulation& t, const Isomorphism& iso);

/// Orientation signs (+1/-1) per tetrahedron such that every gluing
/// reverses orientation, or nullopt if the triangulation is non-orientable.
std::optional<std::vector<int>> orientation_signs(const Triangulation& t);

/// True when every gluing permutation is odd, i.e. all tetrahedra carry
/// the orientation of their vertex order 0123.
bool is_oriented(const Triangulation& t);

/// Relabels tetrahedra with a negative orientation sign by the transposition
/// (2 3).  Signs are normalised so the lowest-index tetrahedron of each
/// component keeps its labeling.  Returns nullopt for non-orientable input.
std::optional<Triangulation> oriented_copy(const Triangulation& t);

}  // namespace esstri::tri
