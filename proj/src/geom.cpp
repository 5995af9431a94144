#include "esstri/geom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "esstri/skeleton.hpp"

namespace esstri::geom {

using tri::Triangulation;

// ------------------------------------------------------------ Gaussian rationals

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
  return {a.re + b.re, a.im + b.im};
}
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
  return {a.re - b.re, a.im - b.im};
}
GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  if (b.is_zero()) throw GeomError("division by zero");
  const mpq_class n = b.norm();
  GaussianRational p = a * b.conj();
  return {mpq_class(p.re / n), mpq_class(p.im / n)};
}

namespace {

mpq_class parse_rational(const std::string& s, const std::string& whole) {
  if (s.empty()) return 1;
  auto digits = [](const std::string& x) {
    return !x.empty() && std::all_of(x.begin(), x.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  if (slash == std::string::npos ? !digits(s) : (!digits(s.substr(0, slash)) || !digits(s.substr(slash + 1))))
    throw GeomError("bad Gaussian rational: " + whole);
  mpq_class q(s);
  if (slash != std::string::npos && q.get_den() == 0) throw GeomError("zero denominator: " + whole);
  q.canonicalize();
  return q;
}

}  // namespace

GaussianRational parse_gaussian(const std::string& input) {
  std::string s;
  for (char c : input)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw GeomError("empty Gaussian rational");
  GaussianRational out;
  std::size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (any) {
      throw GeomError("bad Gaussian rational: " + input);
    }
    std::size_t end = s.find_first_of("+-", pos);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? s.size() : end;
    if (term.empty()) throw GeomError("bad Gaussian rational: " + input);
    if (term.back() == 'i') {
      term.pop_back();
      if (!term.empty() && term.back() == '*') term.pop_back();
      out.im += sign * parse_rational(term, input);
    } else {
      if (term.empty()) throw GeomError("bad Gaussian rational: " + input);
      out.re += sign * parse_rational(term, input);
    }
    any = true;
  }
  return out;
}

std::string to_string(const GaussianRational& g) {
  std::ostringstream os;
  if (g.im == 0) {
    os << g.re.get_str();
    return os.str();
  }
  if (g.re != 0) os << g.re.get_str();
  mpq_class m = abs(g.im);
  if (g.im < 0)
    os << '-';
  else if (g.re != 0)
    os << '+';
  if (m != 1) os << m.get_str();
  os << 'i';
  return os.str();
}

ExactShapes parse_shapes(const std::vector<std::string>& text) {
  ExactShapes out;
  for (const auto& s : text) out.push_back(parse_gaussian(s));
  return out;
}

std::optional<mpq_class> exact_argument(const GaussianRational& g) {
  if (g.is_zero()) return std::nullopt;
  if (g.im == 0) return g.re > 0 ? mpq_class(0) : mpq_class(1);
  if (g.re == 0) return g.im > 0 ? mpq_class(1, 2) : mpq_class(-1, 2);
  if (abs(g.re) != abs(g.im)) return std::nullopt;
  if (g.im > 0) return g.re > 0 ? mpq_class(1, 4) : mpq_class(3, 4);
  return g.re > 0 ? mpq_class(-1, 4) : mpq_class(-3, 4);
}

// ------------------------------------------------------------ equations

const ExponentRow& GluingSystem::equation(std::size_t i) const {
  if (i < edge_rows.size()) return edge_rows[i];
  i -= edge_rows.size();
  return cusps.at(i / 2).rows[i % 2];
}

namespace {

int sequence_sign(std::array<int, 4> p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

ExponentRow cusp_row(const Triangulation& t, const std::vector<int>& orientation,
                     const std::vector<pi1::LinkStep>& loop) {
  ExponentRow row(t.size(), {0, 0, 0});
  // Drop backtracks first; a U-turn is a half rotation the exponents can't record.
  auto back = [&](const pi1::LinkStep& a, const pi1::LinkStep& b) {
    const auto& g = t.gluing(a.tet, a.face);
    return g && g->tet == b.tet && g->perm[a.vertex] == b.vertex && g->perm[a.face] == b.face;
  };
  std::vector<pi1::LinkStep> red;
  for (const auto& s : loop) {
    if (!red.empty() && back(red.back(), s)) {
      red.pop_back();
      continue;
    }
    red.push_back(s);
  }
  std::size_t lo = 0;
  while (red.size() - lo >= 2 && back(red.back(), red[lo])) {
    red.pop_back();
    ++lo;
  }
  red.erase(red.begin(), red.begin() + static_cast<std::ptrdiff_t>(lo));
  const std::size_t n = red.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = red[k];
    const auto& prev = red[(k + n - 1) % n];
    const auto& g = t.gluing(prev.tet, prev.face);
    if (!g || g->tet != s.tet || g->perm[prev.vertex] != s.vertex)
      throw GeomError("link path is not closed");
    const int f1 = g->perm[prev.face], f2 = s.face;
    if (f1 == f2) continue;
    int w = 0;
    while (w == s.vertex || w == f1 || w == f2) ++w;
    const int sign = orientation[s.tet] * sequence_sign({s.vertex, f1, f2, w});
    row[s.tet][static_cast<std::size_t>(tri::slot_of(s.vertex, w))] += sign;
  }
  return row;
}

GluingSystem build_gluing_system(const Triangulation& t) {
  const auto sk = tri::build_skeleton(t);
  for (const auto& v : sk.vertices)
    if (v.kind != tri::SurfaceKind::torus) throw GeomError("gluing equations need torus vertex links");
  const auto orientation = tri::orientation_signs(t);
  if (!orientation) throw GeomError("gluing equations need an orientable triangulation");
  GluingSystem sys;
  sys.tet_count = t.size();
  for (const auto& e : sk.edges) {
    ExponentRow row(t.size(), {0, 0, 0});
    for (const auto& c : e.corners) ++row[c.tet][static_cast<std::size_t>(tri::slot_of(c.a, c.b))];
    sys.edge_rows.push_back(row);
  }
  const auto sp = pi1::presentation_spine(t, sk);
  for (std::size_t v = 0; v < sk.vertex_count(); ++v) {
    auto ps = pi1::peripheral_words(t, sk, sp, v);
    CuspEquations c;
    c.vertex = v;
    for (std::size_t i = 0; i < 2; ++i) c.rows[i] = cusp_row(t, *orientation, ps.curves.at(i).path);
    sys.cusps.push_back(c);
  }
  return sys;
}

// ------------------------------------------------------------ verification

bool ShapeReport::ok() const {
  auto good = [](const EquationCheck& c) { return c.ok(); };
  return std::all_of(edges.begin(), edges.end(), good) && std::all_of(cusps.begin(), cusps.end(), good);
}

namespace {

void check_shapes(std::size_t n, const ExactShapes& shapes) {
  if (shapes.size() != n) throw GeomError("expected one shape per tetrahedron");
  for (const auto& z : shapes)
    if (z.is_zero() || z == GaussianRational(1)) throw GeomError("shape equal to 0 or 1");
}

GaussianRational power(const GaussianRational& x, int e) {
  GaussianRational r(1);
  for (int i = 0; i < std::abs(e); ++i) r = r * x;
  return e < 0 ? GaussianRational(1) / r : r;
}

double arg_of(const GaussianRational& g) { return std::atan2(g.im.get_d(), g.re.get_d()); }

}  // namespace

ShapeReport verify_shapes(const GluingSystem& sys, const ExactShapes& shapes, double tol) {
  check_shapes(sys.tet_count, shapes);
  std::vector<std::array<GaussianRational, 3>> slots;
  for (const auto& z : shapes) slots.push_back(slot_values(z));
  ShapeReport rep;
  for (std::size_t i = 0; i < sys.equation_count(); ++i) {
    const auto& row = sys.equation(i);
    EquationCheck c;
    c.product = GaussianRational(1);
    for (std::size_t t = 0; t < row.size(); ++t)
      for (std::size_t s = 0; s < 3; ++s) {
        if (row[t][s] == 0) continue;
        c.product = c.product * power(slots[t][s], row[t][s]);
        c.argument_sum += row[t][s] * arg_of(slots[t][s]);
      }
    c.target = sys.is_edge_equation(i) ? 2 * std::numbers::pi : 0.0;
    c.product_is_one = c.product == GaussianRational(1);
    c.argument_ok = std::abs(c.argument_sum - c.target) < tol;
    (sys.is_edge_equation(i) ? rep.edges : rep.cusps).push_back(c);
  }
  for (std::size_t t = 0; t < shapes.size(); ++t)
    if (shapes[t].is_real()) rep.flat.push_back(t);
  return rep;
}

ShapeReport verify_shapes(const Triangulation& t, const ExactShapes& shapes, double tol) {
  return verify_shapes(build_gluing_system(t), shapes, tol);
}

std::vector<Complex> log_residuals(const GluingSystem& sys, const FloatShapes& z) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < sys.equation_count(); ++i) {
    const auto& row = sys.equation(i);
    Complex sum = 0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      auto s = slot_values(z[t]);
      for (std::size_t k = 0; k < 3; ++k)
        if (row[t][k] != 0) sum += static_cast<double>(row[t][k]) * std::log(s[k]);
    }
    if (sys.is_edge_equation(i)) sum -= Complex(0, 2 * std::numbers::pi);
    out.push_back(sum);
  }
  return out;
}

std::vector<std::size_t> independent_equations(const GluingSystem& sys) {
  const std::size_t n = sys.tet_count;
  std::vector<std::vector<mpq_class>> basis;
  std::vector<std::size_t> pivots, out;
  // Edges, then one curve per cusp, then the rest; stop at n rows.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < sys.equation_count(); ++i)
    if (sys.is_edge_equation(i) || (i - sys.edge_rows.size()) % 2 == 0) order.push_back(i);
  for (std::size_t i = sys.edge_rows.size() + 1; i < sys.equation_count(); i += 2) order.push_back(i);
  for (std::size_t i : order) {
    if (out.size() == n) break;
    const auto& row = sys.equation(i);
    std::vector<mpq_class> v(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
      v[2 * t] = row[t][0] - row[t][2];
      v[2 * t + 1] = row[t][1] - row[t][2];
    }
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (v[pivots[k]] != 0) {
        mpq_class f = v[pivots[k]] / basis[k][pivots[k]];
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * basis[k][j];
      }
    auto nz = std::find_if(v.begin(), v.end(), [](const mpq_class& x) { return x != 0; });
    if (nz == v.end()) continue;
    pivots.push_back(static_cast<std::size_t>(nz - v.begin()));
    basis.push_back(v);
    out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NewtonResult solve_shapes_newton(const Triangulation& t, const FloatShapes& initial, double tol,
                                 std::size_t max_iter) {
  return solve_shapes_newton(build_gluing_system(t), initial, tol, max_iter);
}

NewtonResult solve_shapes_newton(const GluingSystem& sys, const FloatShapes& initial, double tol,
                                 std::size_t max_iter) {
  NewtonResult res;
  const std::size_t n = sys.tet_count;
  if (initial.size() != n) throw GeomError("expected one initial shape per tetrahedron");
  res.used_equations = independent_equations(sys);
  const std::size_t m = res.used_equations.size();
  FloatShapes z = initial;
  auto max_residual = [&](const FloatShapes& x) {
    double r = 0;
    for (const auto& v : log_residuals(sys, x)) r = std::max(r, std::isfinite(std::abs(v)) ? std::abs(v) : INFINITY);
    return r;
  };
  for (std::size_t it = 0;; ++it) {
    res.iterations = it;
    res.residual = max_residual(z);
    if (res.residual < tol) {
      res.shapes = z;
      return res;
    }
    if (it == max_iter || !std::isfinite(res.residual)) break;
    Eigen::MatrixXcd J(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    Eigen::VectorXcd F(static_cast<Eigen::Index>(m));
    const auto all = log_residuals(sys, z);
    for (std::size_t r = 0; r < m; ++r) {
      const auto& row = sys.equation(res.used_equations[r]);
      F(static_cast<Eigen::Index>(r)) = all[res.used_equations[r]];
      for (std::size_t c = 0; c < n; ++c) {
        const Complex w = z[c];
        J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            static_cast<double>(row[c][0]) / w + static_cast<double>(row[c][1]) / (1.0 - w) +
            static_cast<double>(row[c][2]) / (w * (w - 1.0));
      }
    }
    Eigen::VectorXcd step;
    if (m == n) {
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
      if (!lu.isInvertible()) {
        res.failure = "singular Jacobian at iteration " + std::to_string(it);
        return res;
      }
      step = lu.solve(F);
    } else {
      step = J.completeOrthogonalDecomposition().solve(F);
    }
    // Halve the step until the residual drops.
    double lambda = 1;
    FloatShapes next = z;
    for (int h = 0; h < 30; ++h, lambda /= 2) {
      for (std::size_t c = 0; c < n; ++c) next[c] = z[c] - lambda * step(static_cast<Eigen::Index>(c));
      if (max_residual(next) < res.residual) break;
    }
    z = next;
  }
  res.failure = "no convergence after " + std::to_string(res.iterations) + " iterations (residual " +
                std::to_string(res.residual) + ")";
  return res;
}

// ------------------------------------------------------------ angles

std::optional<angles::AngleVector> SlotAngles::exact_vector() const {
  angles::AngleVector v;
  for (const auto& x : exact) {
    if (!x) return std::nullopt;
    v.push_back(*x);
  }
  return v;
}

namespace {

double system_residual(const angles::AngleSystem& s, const std::vector<double>& x) {
  double r = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double sum = -s.rhs[i];
    for (std::size_t j = 0; j < s.cols(); ++j) sum += s.matrix[i][j] * x[j];
    r = std::max(r, std::abs(sum));
  }
  return r;
}

}  // namespace

SlotAngles shapes_to_angles(const Triangulation& t, const ExactShapes& shapes) {
  if (!verify_shapes(t, shapes).ok()) throw GeomError("shapes do not satisfy the gluing equations");
  SlotAngles out;
  for (const auto& z : shapes)
    for (const auto& s : slot_values(z)) {
      out.pi_units.push_back(arg_of(s) / std::numbers::pi);
      out.exact.push_back(exact_argument(s));
    }
  const auto sys = angles::build_angle_system(t);
  out.residual = system_residual(sys, out.pi_units);
  if (auto v = out.exact_vector()) {
    out.semi = angles::satisfies(sys, *v) && angles::is_semi(*v);
    out.strict = out.semi && angles::is_strict(*v);
  } else {
    out.semi = out.residual < 1e-9 &&
               std::all_of(out.pi_units.begin(), out.pi_units.end(), [](double a) { return a > -1e-12; });
    // exact zeros come from real slot values
    bool positive = true;
    for (std::size_t i = 0; i < out.pi_units.size(); ++i)
      if (out.exact[i] ? *out.exact[i] <= 0 : out.pi_units[i] <= 1e-12) positive = false;
    out.strict = out.semi && positive;
  }
  return out;
}

SlotAngles shapes_to_angles(const Triangulation& t, const FloatShapes& shapes, double tol) {
  const auto sys = build_gluing_system(t);
  if (shapes.size() != t.size()) throw GeomError("expected one shape per tetrahedron");
  for (const auto& r : log_residuals(sys, shapes))
    if (!(std::abs(r) < std::max(tol, 1e-6))) throw GeomError("shapes do not satisfy the gluing equations");
  SlotAngles out;
  for (const auto& z : shapes)
    for (const auto& s : slot_values(z)) {
      out.pi_units.push_back(std::arg(s) / std::numbers::pi);
      out.exact.push_back(std::nullopt);
    }
  out.residual = system_residual(angles::build_angle_system(t), out.pi_units);
  out.semi = out.residual < tol &&
             std::all_of(out.pi_units.begin(), out.pi_units.end(), [&](double a) { return a > -tol; });
  out.strict = out.semi && std::all_of(out.pi_units.begin(), out.pi_units.end(), [&](double a) { return a > tol; });
  return out;
}

// ------------------------------------------------------------ development

namespace {

struct ExactOps {
  using F = GaussianRational;
  bool zero(const F& x) const { return x.is_zero(); }
  bool equal(const F& a, const F& b) const { return a == b; }
  bool real(const F& x) const { return x.is_real(); }
  bool positive_imag(const F& x) const { return x.im > 0; }
  Complex to_complex(const F& x) const { return x.to_complex(); }
};

struct FloatOps {
  using F = Complex;
  double tol;
  bool zero(const F& x) const { return std::abs(x) <= tol; }
  bool equal(const F& a, const F& b) const { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }
  bool real(const F& x) const { return std::abs(x.imag()) <= tol; }
  bool positive_imag(const F& x) const { return x.imag() > tol; }
  Complex to_complex(const F& x) const { return x; }
};

template <class Ops>
struct Developer {
  using F = typename Ops::F;
  struct Point {
    F x, y;
  };
  struct Mat {
    F a, b, c, d;
  };

  const Triangulation& t;
  const std::vector<F>& shapes;
  Ops ops;
  tri::Skeleton sk;

  Developer(const Triangulation& tr, const std::vector<F>& z, Ops o)
      : t(tr), shapes(z), ops(o), sk(tri::build_skeleton(tr)) {}

  Point normalize(const Point& p) const {
    if (ops.zero(p.y) || (!ops.zero(p.x) && ops.zero(p.y / p.x))) return {F(1), F(0)};
    return {p.x / p.y, F(1)};
  }
  bool infinite(const Point& p) const { return ops.zero(p.y); }
  bool same(const Point& p, const Point& q) const {
    if (infinite(p) || infinite(q)) return infinite(p) && infinite(q);
    return ops.equal(p.x, q.x);
  }
  static F det(const Point& p, const Point& q) { return p.x * q.y - q.x * p.y; }

  F shape_at(std::size_t tet, int i, int j) const {
    return slot_values(shapes[tet])[static_cast<std::size_t>(tri::slot_of(i, j))];
  }

  // Position of vertex s of tet from the other three.
  Point fourth(std::size_t tet, const std::array<Point, 4>& pos, int s) const {
    std::array<int, 3> k{};
    for (int v = 0, n = 0; v < 4; ++v)
      if (v != s) k[static_cast<std::size_t>(n++)] = v;
    std::array<int, 4> order{k[0], k[1], k[2], s};
    if (sequence_sign(order) < 0) std::swap(order[0], order[1]);
    const Point& A = pos[static_cast<std::size_t>(order[0])];
    const Point& B = pos[static_cast<std::size_t>(order[1])];
    const Point& K = pos[static_cast<std::size_t>(order[2])];
    const F Z = shape_at(tet, order[0], order[1]);
    const F ab = det(A, B), kb = det(K, B);
    Point X{Z * ab * K.x - kb * A.x, Z * ab * K.y - kb * A.y};
    if (ops.zero(X.x) && ops.zero(X.y)) throw GeomError("degenerate development");
    return normalize(X);
  }

  std::array<Point, 4> across(std::size_t tet, const std::array<Point, 4>& pos, int face, std::size_t& out_tet) const {
    const auto& g = t.gluing(tet, face);
    if (!g) throw GeomError("development needs every face glued");
    std::array<Point, 4> np;
    for (int v = 0; v < 4; ++v)
      if (v != face) np[static_cast<std::size_t>(g->perm[v])] = pos[static_cast<std::size_t>(v)];
    out_tet = g->tet;
    np[static_cast<std::size_t>(g->perm[face])] = fourth(g->tet, np, g->perm[face]);
    return np;
  }

  std::array<Point, 4> root_positions(std::size_t tet) const {
    return {Point{F(0), F(1)}, Point{F(1), F(1)}, Point{F(1), F(0)}, Point{shapes[tet], F(1)}};
  }

  std::size_t edge_class(std::size_t tet, int a, int b) const {
    return sk.edge_of[tet][static_cast<std::size_t>(tri::edge_index(a, b))].edge;
  }

  bool same_ends(const Point& p1, const Point& q1, const Point& p2, const Point& q2) const {
    return (same(p1, p2) && same(q1, q2)) || (same(p1, q2) && same(q1, p2));
  }

  // Moebius helpers
  static Point apply(const Mat& m, const Point& p) { return {m.a * p.x + m.b * p.y, m.c * p.x + m.d * p.y}; }
  static Mat mul(const Mat& m, const Mat& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  static Mat adj(const Mat& m) { return {m.d, F(0) - m.b, F(0) - m.c, m.a}; }
  // Sends A -> 0, B -> infinity, C -> 1.
  static Mat standard(const Point& A, const Point& B, const Point& C) {
    const F cb = det(C, B), ca = det(C, A);
    return {A.y * cb, F(0) - A.x * cb, B.y * ca, F(0) - B.x * ca};
  }
  bool is_identity(const Mat& m) const { return ops.zero(m.b) && ops.zero(m.c) && ops.equal(m.a, m.d); }
  bool is_parabolic(const Mat& m) const {
    const F tr = m.a + m.d;
    return !is_identity(m) && ops.equal(tr * tr, F(4) * (m.a * m.d - m.b * m.c));
  }
  Point fixed_point(const Mat& m) const {
    if (ops.zero(m.c)) return {F(1), F(0)};
    return normalize({m.a - m.d, F(2) * m.c});
  }
};

// Integer n with x1 = x2 + n tau, both already in translation coordinates.
template <class Dev>
bool translate_match(const Dev& d, const typename Dev::Point& p1, const typename Dev::Point& q1,
                     const typename Dev::Point& p2, const typename Dev::Point& q2,
                     const std::optional<GaussianRational>& tau) {
  using F = GaussianRational;
  auto shifted = [&](const typename Dev::Point& p, const F& s) {
    if (d.infinite(p)) return p;
    return typename Dev::Point{p.x + s, F(1)};
  };
  if (!tau) return d.same_ends(p1, q1, p2, q2);
  for (auto [a, b] : {std::pair{p2, q2}, std::pair{q2, p2}}) {
    const typename Dev::Point* base1 = &p1;
    const typename Dev::Point* base2 = &a;
    if (d.infinite(p1) || d.infinite(a)) {
      if (!(d.infinite(p1) && d.infinite(a))) continue;
      base1 = &q1;
      base2 = &b;
      if (d.infinite(q1) || d.infinite(b)) continue;
    }
    F n = (base1->x - base2->x) / *tau;
    if (!n.is_real() || n.re.get_den() != 1) continue;
    F s = n * *tau;
    if (d.same(p1, shifted(a, s)) && d.same(q1, shifted(b, s))) return true;
  }
  return false;
}

template <class Ops>
DevelopReport develop(const Triangulation& t, const std::vector<typename Ops::F>& shapes, std::size_t radius, Ops ops,
                      bool exact) {
  using Dev = Developer<Ops>;
  using Point = typename Dev::Point;
  Dev dev(t, shapes, ops);
  DevelopReport rep;
  rep.radius = radius;
  rep.exact = exact;
  std::vector<std::array<Point, 4>> pos;

  rep.tets.push_back({0, 0, std::nullopt, -1});
  pos.push_back(dev.root_positions(0));
  for (std::size_t i = 0; i < rep.tets.size(); ++i) {
    if (rep.tets[i].depth >= radius) continue;
    for (int f = 0; f < 4; ++f) {
      std::size_t nt = 0;
      auto np = dev.across(rep.tets[i].tet, pos[i], f, nt);
      bool seen = false;
      for (std::size_t j = 0; j < rep.tets.size() && !seen; ++j) {
        if (rep.tets[j].tet != nt) continue;
        seen = true;
        for (std::size_t v = 0; v < 4; ++v)
          if (!dev.same(pos[j][v], np[v])) seen = false;
      }
      if (seen) continue;
      rep.tets.push_back({nt, rep.tets[i].depth + 1, i, f});
      pos.push_back(np);
    }
  }
  for (const auto& p : pos) {
    std::array<std::optional<Complex>, 4> c;
    for (std::size_t v = 0; v < 4; ++v)
      if (!dev.infinite(p[v])) c[v] = ops.to_complex(p[v].x);
    rep.positions.push_back(c);
    if constexpr (std::is_same_v<typename Ops::F, GaussianRational>) {
      std::array<std::optional<GaussianRational>, 4> e;
      for (std::size_t v = 0; v < 4; ++v)
        if (!dev.infinite(p[v])) e[v] = p[v].x;
      rep.exact_positions.push_back(e);
    }
  }

  // Edge scan.
  std::vector<EdgeLift> lifts;
  for (std::size_t i = 0; i < rep.tets.size(); ++i)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        EdgeLift e{i, a, b, dev.edge_class(rep.tets[i].tet, a, b)};
        if (dev.same(pos[i][static_cast<std::size_t>(a)], pos[i][static_cast<std::size_t>(b)]))
          rep.coincident.push_back(e);
        lifts.push_back(e);
      }
  auto ancestors = [&](std::size_t n) {
    std::vector<std::size_t> out{n};
    while (rep.tets[out.back()].parent) out.push_back(*rep.tets[out.back()].parent);
    return out;
  };
  std::set<std::pair<std::size_t, std::size_t>> reported;
  for (std::size_t i = 0; i < lifts.size(); ++i)
    for (std::size_t j = i + 1; j < lifts.size(); ++j) {
      const auto& e1 = lifts[i];
      const auto& e2 = lifts[j];
      if (e1.edge_class == e2.edge_class) continue;
      auto key = std::minmax(e1.edge_class, e2.edge_class);
      if (reported.count(key)) continue;
      if (!dev.same_ends(pos[e1.node][static_cast<std::size_t>(e1.a)], pos[e1.node][static_cast<std::size_t>(e1.b)],
                         pos[e2.node][static_cast<std::size_t>(e2.a)], pos[e2.node][static_cast<std::size_t>(e2.b)]))
        continue;
      reported.insert(key);
      ParallelPair pp{e1, e2, {}};
      auto up1 = ancestors(e1.node), up2 = ancestors(e2.node);
      while (up1.size() > 1 && up2.size() > 1 && up1[up1.size() - 2] == up2[up2.size() - 2]) {
        up1.pop_back();
        up2.pop_back();
      }
      for (std::size_t n : up1) pp.path.push_back(rep.tets[n].tet);
      for (std::size_t k = up2.size() - 1; k-- > 0;) pp.path.push_back(rep.tets[up2[k]].tet);
      rep.parallel.push_back(pp);
    }

  // Flat clusters.
  rep.positive_or_flat = true;
  bool strictly_positive = true;
  std::vector<bool> flat(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    flat[i] = ops.real(shapes[i]);
    if (!flat[i] && !ops.positive_imag(shapes[i])) rep.positive_or_flat = strictly_positive = false;
  }
  std::vector<bool> done(t.size(), false);
  bool all_close = true;
  for (std::size_t root = 0; root < t.size(); ++root) {
    if (!flat[root] || done[root]) continue;
    FlatCluster cl;
    std::map<std::size_t, std::array<Point, 4>> dpos;
    std::vector<typename Dev::Mat> holonomy;
    dpos[root] = dev.root_positions(root);
    std::deque<std::size_t> todo{root};
    done[root] = true;
    std::set<std::pair<std::size_t, int>> used;  // tree gluings, both sides
    std::vector<std::pair<std::size_t, int>> cotree;
    while (!todo.empty()) {
      std::size_t a = todo.front();
      todo.pop_front();
      cl.tets.push_back(a);
      for (int f = 0; f < 4; ++f) {
        const auto& g = t.gluing(a, f);
        if (!g || !flat[g->tet] || used.count({a, f})) continue;
        used.insert({a, f});
        used.insert({g->tet, g->perm[f]});
        if (!done[g->tet]) {
          std::size_t nt = 0;
          dpos[g->tet] = dev.across(a, dpos[a], f, nt);
          done[g->tet] = true;
          todo.push_back(g->tet);
        } else {
          cotree.push_back({a, f});
        }
      }
    }
    std::sort(cl.tets.begin(), cl.tets.end());
    bool consistent = true;
    for (auto [a, f] : cotree) {
      std::size_t nt = 0;
      auto q = dev.across(a, dpos[a], f, nt);
      const auto& r = dpos[nt];
      auto m = Dev::mul(Dev::adj(Dev::standard(q[0], q[1], q[2])), Dev::standard(r[0], r[1], r[2]));
      if (!dev.same(dev.normalize(Dev::apply(m, r[3])), q[3])) consistent = false;
      holonomy.push_back(m);
    }
    if constexpr (std::is_same_v<typename Ops::F, GaussianRational>) {
      std::vector<typename Dev::Mat> nontrivial;
      for (const auto& m : holonomy)
        if (!dev.is_identity(m)) nontrivial.push_back(m);
      std::optional<Point> fixed;
      std::optional<GaussianRational> tau;
      typename Dev::Mat conj{GaussianRational(1), GaussianRational(0), GaussianRational(0), GaussianRational(1)};
      bool ok = consistent;
      if (!consistent) cl.detail = "holonomy does not match the fourth vertex";
      for (const auto& m : nontrivial) {
        if (!ok) break;
        if (!dev.is_parabolic(m)) {
          ok = false;
          cl.detail = "holonomy is not parabolic";
          break;
        }
        Point p = dev.fixed_point(m);
        if (!fixed) {
          fixed = p;
          conj = dev.infinite(p) ? typename Dev::Mat{GaussianRational(1), GaussianRational(0), GaussianRational(0),
                                                     GaussianRational(1)}
                 : !p.x.is_zero()
                     ? typename Dev::Mat{GaussianRational(1), GaussianRational(0), p.y, -p.x}
                     : typename Dev::Mat{GaussianRational(0), GaussianRational(1), p.y, -p.x};
        } else if (!dev.same(*fixed, p)) {
          ok = false;
          cl.detail = "parabolic holonomies with different fixed points";
          break;
        }
        auto c = Dev::mul(Dev::mul(conj, m), Dev::adj(conj));
        GaussianRational step = c.b / c.a;
        if (!tau) {
          tau = step;
        } else {
          GaussianRational q = step / *tau;
          if (!q.is_real()) {
            ok = false;
            cl.detail = "translations of rank two";
            break;
          }
          // gcd(1, n/d) = 1/d
          tau = *tau * GaussianRational(mpq_class(1, q.re.get_den()));
        }
      }
      if (ok) {
        cl.closes_up = true;
        cl.detail = tau ? "parabolic translation by " + to_string(*tau) + " (conjugated)"
                        : "trivial holonomy";
        std::vector<std::tuple<std::size_t, Point, Point>> edges;
        for (std::size_t a : cl.tets)
          for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y) {
              Point p = dev.normalize(Dev::apply(conj, dpos[a][static_cast<std::size_t>(x)]));
              Point q = dev.normalize(Dev::apply(conj, dpos[a][static_cast<std::size_t>(y)]));
              edges.emplace_back(dev.edge_class(a, x, y), p, q);
            }
        std::set<std::pair<std::size_t, std::size_t>> found;
        for (std::size_t i = 0; i < edges.size(); ++i)
          for (std::size_t j = i + 1; j < edges.size(); ++j) {
            auto& [c1, p1, q1] = edges[i];
            auto& [c2, p2, q2] = edges[j];
            if (c1 == c2) continue;
            if (translate_match(dev, p1, q1, p2, q2, tau)) found.insert(std::minmax(c1, c2));
          }
        cl.parallel_classes.assign(found.begin(), found.end());
      }
    } else {
      cl.detail = "flat cluster analysis needs exact shapes";
    }
    if (!cl.closes_up) all_close = false;
    rep.clusters.push_back(cl);
  }
  rep.conclusive_for_flat_clusters = strictly_positive && all_close;
  return rep;
}

}  // namespace

DevelopReport develop_and_scan(const Triangulation& t, const ExactShapes& shapes, std::size_t radius) {
  if (!verify_shapes(t, shapes).ok()) throw GeomError("shapes do not satisfy the gluing equations");
  return develop(t, shapes, radius, ExactOps{}, true);
}

DevelopReport develop_and_scan(const Triangulation& t, const FloatShapes& shapes, std::size_t radius, double tol) {
  const auto sys = build_gluing_system(t);
  if (shapes.size() != t.size()) throw GeomError("expected one shape per tetrahedron");
  for (const auto& r : log_residuals(sys, shapes))
    if (!(std::abs(r) < std::max(tol, 1e-6))) throw GeomError("shapes do not satisfy the gluing equations");
  return develop(t, shapes, radius, FloatOps{tol}, false);
}

}  // namespace esstri::geom
