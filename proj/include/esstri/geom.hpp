#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "esstri/angles.hpp"
#include "esstri/pi1.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::geom {

class GeomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaussianRational {
  mpq_class re, im;

  GaussianRational() = default;
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
};

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
/// Throws GeomError on division by zero.
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);

/// Accepts forms like "2i", "-1+2i", "3/5+1/5i", "1/2-1/2*i", "-1".
GaussianRational parse_gaussian(const std::string& s);
std::string to_string(const GaussianRational& g);

using Complex = std::complex<double>;
using ExactShapes = std::vector<GaussianRational>;
using FloatShapes = std::vector<Complex>;

ExactShapes parse_shapes(const std::vector<std::string>& text);

/// Slot values z, 1/(1-z), 1-1/z at {01,23}, {02,13}, {03,12}.
template <class F>
std::array<F, 3> slot_values(const F& z) {
  const F one(1);
  return {z, one / (one - z), one - one / z};
}

/// Exact argument in units of pi, in (-1, 1], when it is a multiple of
/// pi/4 (the only rational multiples a Gaussian rational can have).
std::optional<mpq_class> exact_argument(const GaussianRational& g);

// ------------------------------------------------------------ equations

/// Exponents (a, b, c) per tetrahedron for slots 0, 1, 2.
using ExponentRow = std::vector<std::array<int, 3>>;

struct CuspEquations {
  std::size_t vertex = 0;
  std::array<ExponentRow, 2> rows;
};

struct GluingSystem {
  std::size_t tet_count = 0;
  std::vector<ExponentRow> edge_rows;
  std::vector<CuspEquations> cusps;

  std::size_t equation_count() const { return edge_rows.size() + 2 * cusps.size(); }
  /// Edge rows first, then the two rows of each cusp.
  const ExponentRow& equation(std::size_t i) const;
  bool is_edge_equation(std::size_t i) const { return i < edge_rows.size(); }
};

/// Requires every vertex link to be a torus.
GluingSystem build_gluing_system(const tri::Triangulation& t);

/// Log-holonomy exponents of a closed link path.  Each turn at a corner
/// triangle past the corner w contributes sign * log(slot(v, w)).
ExponentRow cusp_row(const tri::Triangulation& t, const std::vector<int>& orientation,
                     const std::vector<pi1::LinkStep>& loop);

// ------------------------------------------------------------ verification

struct EquationCheck {
  GaussianRational product;
  double argument_sum = 0;  ///< radians
  double target = 0;        ///< 2 pi for edges, 0 for cusps
  bool product_is_one = false;
  bool argument_ok = false;
  bool ok() const { return product_is_one && argument_ok; }
};

struct ShapeReport {
  std::vector<EquationCheck> edges;
  std::vector<EquationCheck> cusps;
  std::vector<std::size_t> flat;
  bool ok() const;
};

/// Throws GeomError on a shape equal to 0 or 1 or a size mismatch.
ShapeReport verify_shapes(const GluingSystem& sys, const ExactShapes& shapes, double tol = 1e-9);
ShapeReport verify_shapes(const tri::Triangulation& t, const ExactShapes& shapes, double tol = 1e-9);

/// Per equation: sum of exponent * principal log minus the target.
std::vector<Complex> log_residuals(const GluingSystem& sys, const FloatShapes& z);

struct NewtonResult {
  std::optional<FloatShapes> shapes;
  std::size_t iterations = 0;
  double residual = 0;
  std::string failure;
  /// Equations kept in the square system, in index order.
  std::vector<std::size_t> used_equations;
};

NewtonResult solve_shapes_newton(const tri::Triangulation& t, const FloatShapes& initial, double tol,
                                 std::size_t max_iter);
NewtonResult solve_shapes_newton(const GluingSystem& sys, const FloatShapes& initial, double tol,
                                 std::size_t max_iter);

/// Greedy independent subset of equations, judged on the projected
/// exponents (a - c, b - c) over the rationals.
std::vector<std::size_t> independent_equations(const GluingSystem& sys);

// ------------------------------------------------------------ angles

struct SlotAngles {
  /// 3 per tetrahedron, units of pi.
  std::vector<double> pi_units;
  /// Exact value where the argument is a multiple of pi/4.
  std::vector<std::optional<mpq_class>> exact;
  double residual = 0;
  bool semi = false;
  bool strict = false;
  /// Complete exact vector when every entry is exact.
  std::optional<angles::AngleVector> exact_vector() const;
};

/// Throws GeomError when verify_shapes fails.
SlotAngles shapes_to_angles(const tri::Triangulation& t, const ExactShapes& shapes);
SlotAngles shapes_to_angles(const tri::Triangulation& t, const FloatShapes& shapes, double tol = 1e-9);

// ------------------------------------------------------------ development

struct DevelopedTet {
  std::size_t tet = 0;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  int via_face = -1;
};

struct EdgeLift {
  std::size_t node = 0;
  int a = 0, b = 1;
  std::size_t edge_class = 0;
};

struct ParallelPair {
  EdgeLift first, second;
  /// Tetrahedra along the development tree from one lift to the other.
  std::vector<std::size_t> path;
};

struct FlatCluster {
  std::vector<std::size_t> tets;
  /// The cluster holonomy is trivial or generated by one parabolic, so its
  /// whole development was scanned.
  bool closes_up = false;
  std::string detail;
  /// Distinct edge classes whose lifts in the cluster share both endpoints.
  std::vector<std::pair<std::size_t, std::size_t>> parallel_classes;
};

struct DevelopReport {
  std::size_t radius = 0;
  bool exact = false;
  std::vector<DevelopedTet> tets;
  /// Vertex positions per developed tet; nullopt is infinity.
  std::vector<std::array<std::optional<Complex>, 4>> positions;
  std::vector<std::array<std::optional<GaussianRational>, 4>> exact_positions;
  std::vector<EdgeLift> coincident;
  std::vector<ParallelPair> parallel;
  std::vector<FlatCluster> clusters;
  /// Every shape has positive imaginary part or is flat.
  bool positive_or_flat = false;
  bool conclusive_for_flat_clusters = false;
};

DevelopReport develop_and_scan(const tri::Triangulation& t, const ExactShapes& shapes, std::size_t radius);
DevelopReport develop_and_scan(const tri::Triangulation& t, const FloatShapes& shapes, std::size_t radius,
                               double tol = 1e-9);

}  // namespace esstri::geom
