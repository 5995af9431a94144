#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "esstri/skeleton.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::tri {

/// Parse failure with 1-based position information.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Format { table, json };

/// Table format:
///
///   tets: N
///   i: t (abc) | t (abc) | t (abc) | t (abc) [| shape]
///
/// Columns are faces 012, 013, 023, 123 (face indices 3, 2, 1, 0).  An entry
/// "t (abc)" sends the listed face vertices, in ascending order, to a, b, c;
/// the remaining vertex goes to the missing label.  "-" marks a boundary
/// face.  An optional fifth column holds a shape parameter and is returned
/// by parse_table_shapes.  '#' starts a comment.
Triangulation parse_table(std::string_view text);

/// Raw fifth-column shape strings, one per tetrahedron, if every row has one.
std::optional<std::vector<std::string>> parse_table_shapes(std::string_view text);

/// JSON format: {"tets": N, "gluings": [[[t, [p0,p1,p2,p3]] | null, x4], ...]}.
Triangulation parse_json(std::string_view text);

/// Detects the format from the first significant character.
Format detect_format(std::string_view text);
Triangulation parse_triangulation(std::string_view text);

std::string to_table(const Triangulation& t);
std::string to_json(const Triangulation& t);

Triangulation read_triangulation_file(const std::string& path);

/// Counts, edge cycles and vertex links of a skeleton, as printed by `info`.
struct SkeletonSummary {
  struct Link {
    std::string kind;
    long euler_characteristic = 0;
    bool orientable = true;
    std::size_t triangles = 0;
    friend bool operator==(const Link&, const Link&) = default;
  };
  std::size_t tets = 0;
  std::size_t vertex_count = 0;
  std::vector<std::vector<Corner>> edges;
  std::size_t face_count = 0;
  std::vector<Link> links;
  long euler_characteristic = 0;
  std::string classification;
  friend bool operator==(const SkeletonSummary&, const SkeletonSummary&) = default;
};

SkeletonSummary summarize(const Skeleton& sk);
std::string summary_json(const SkeletonSummary& s);
SkeletonSummary parse_summary_json(std::string_view text);
/// Columns: edge, degree, cycle of corners t(ab).
std::string summary_text(const SkeletonSummary& s);
std::string format_corner(const Corner& c);
std::string read_file(const std::string& path);

}  // namespace esstri::tri
