#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esstri/geom.hpp"
#include "esstri/group.hpp"
#include "esstri/pi1.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::certify {

using pi1::Answer;

class CertifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Tag {
  none,
  strict_angle,
  semi_angle,
  homology,
  pillow_homotopy,
  distinct_cusps,
  geometric_endpoints,
  group_word,
  group_membership,
  group_double_coset,
  budget_exhausted,
};

std::string to_string(Tag t);

/// Certificate sources, in the order they are consulted.
enum class Method { lp, homology, combinatorial, geometry, group };

std::string to_string(Method m);
/// Comma separated list of "lp", "homology", "combinatorial", "geometry", "group".
std::vector<Method> parse_methods(const std::string& spec);

struct Options {
  pi1::Budget budget;
  std::vector<Method> methods{Method::lp, Method::homology, Method::combinatorial, Method::geometry, Method::group};
  /// Exact shapes for the geometric source; skipped when absent.
  std::optional<geom::ExactShapes> shapes;
  std::size_t radius = 3;
  /// Consult every source instead of stopping at the first conclusive one.
  bool all_sources = false;
};

/// A group question as posed: a word, optionally with subgroup generator
/// lists (membership uses h1, double cosets test w in h2 * h1).
struct GroupQuery {
  pi1::Word word;
  std::vector<pi1::Word> h1, h2;
  pi1::GroupVerdict verdict;
};

struct SourceResult {
  Tag tag = Tag::none;
  Answer answer = Answer::unknown;
  std::string detail;
  /// Group questions asked, in order.
  std::vector<GroupQuery> group;
};

struct EdgeVerdict {
  std::size_t edge = 0;
  Answer essential = Answer::unknown;
  Tag tag = Tag::none;
  std::string detail;
  /// Every source consulted for this edge, in order.
  std::vector<SourceResult> sources;
};

/// answer = yes means the two edges are parallel.
struct PairVerdict {
  std::size_t first = 0, second = 0;
  Answer parallel = Answer::unknown;
  Tag tag = Tag::none;
  std::string detail;
  std::vector<SourceResult> sources;
};

struct TriangulationVerdict {
  bool ideal = false;
  Answer essential = Answer::unknown;
  Answer strongly_essential = Answer::unknown;
  /// Set when one global certificate decided everything.
  Tag global = Tag::none;
  std::vector<EdgeVerdict> edges;
  std::vector<PairVerdict> pairs;
  std::vector<std::string> log;
  /// Presentation the group certificates refer to.
  pi1::Presentation presentation;
};

/// Replays every group certificate in the verdict; false on the first
/// that fails.
bool replay_group_certificates(const TriangulationVerdict& v);

/// An edge class as a path between cusp basepoints, read in the spine
/// presentation: from the base triangle of the link at `from`, through the
/// link tree to the edge's first corner, along the edge, then back
/// through the link tree at `to`.
struct EdgePath {
  std::size_t edge = 0;
  std::size_t from = 0, to = 0;
  pi1::Word word;
};

/// Shared data for the ideal case.
struct IdealContext {
  tri::Skeleton skeleton;
  pi1::SpinePresentation spine;
  std::vector<pi1::PeripheralSystem> peripheral;
  std::vector<EdgePath> edges;

  std::vector<pi1::Word> peripheral_gens(std::size_t vertex) const;
};

/// Requires every vertex link to be a torus.
IdealContext build_ideal_context(const tri::Triangulation& t);

/// Pairs of distinct edge classes made parallel by a two-tetrahedron
/// pillow around a degree-2 edge; the edges opposite the degree-2 edge in
/// the two tetrahedra bound a disc through the pillow.
std::vector<std::pair<std::size_t, std::size_t>> pillow_parallel_pairs(const tri::Triangulation& t);

/// Throws CertifyError for unsupported inputs: invalid triangulations,
/// closed triangulations with more than one vertex, links other than
/// tori (ideal) or a single sphere (closed).
TriangulationVerdict certify_essential(const tri::Triangulation& t, const Options& opt = {});
TriangulationVerdict certify_strongly_essential(const tri::Triangulation& t, const Options& opt = {});

std::string verdict_json(const TriangulationVerdict& v);
std::string verdict_text(const TriangulationVerdict& v, bool strong);

}  // namespace esstri::certify
