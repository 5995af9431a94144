#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "esstri/skeleton.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::angles {

/// 3 entries per tetrahedron in units of π, slots {01,23}, {02,13}, {03,12}.
using AngleVector = std::vector<mpq_class>;

struct AngleSystem {
  std::size_t tet_count = 0;
  /// Edge classes with a row, in row order (interior edges only).
  std::vector<std::size_t> edge_rows;
  /// Rows: one per tetrahedron, then one per interior edge class.
  std::vector<std::vector<int>> matrix;
  std::vector<int> rhs;
  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return 3 * tet_count; }
};

AngleSystem build_angle_system(const tri::Triangulation& t);
AngleSystem build_angle_system(const tri::Triangulation& t, const tri::Skeleton& sk);

/// True when x satisfies every equality exactly.
bool satisfies(const AngleSystem& s, const AngleVector& x);
bool is_semi(const AngleVector& x);
bool is_strict(const AngleVector& x);
bool is_taut(const AngleVector& x);

enum class Mode { semi, strict };

struct LPOutcome {
  bool feasible = false;
  std::optional<AngleVector> witness;
  /// Strict mode: optimum of max t subject to all entries >= t.
  std::optional<mpq_class> optimum;
};

/// semi: exact feasibility of the equalities with x >= 0.  strict: the
/// max-min-angle program; feasible exactly when its optimum is positive.
LPOutcome solve_angle_lp(const tri::Triangulation& t, Mode mode);
LPOutcome solve_angle_lp(const AngleSystem& s, Mode mode);

/// Taut structures in lexicographic order of per-tet slot choices.
std::vector<AngleVector> enumerate_taut(const tri::Triangulation& t, std::size_t limit);

/// Slot carrying π in each tet of a taut vector.
std::vector<int> taut_slots(const AngleVector& x);
AngleVector taut_vector(const std::vector<int>& slots);

/// Sum of corner angles minus (n - 2), in units of π.
mpq_class formal_gauss_bonnet(const std::vector<mpq_class>& corner_angles, std::size_t n);

std::string format_rational(const mpq_class& q);

}  // namespace esstri::angles
