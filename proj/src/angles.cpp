#include "esstri/angles.hpp"

#include <algorithm>
#include <stdexcept>

#include "esstri/lp.hpp"

namespace esstri::angles {

AngleSystem build_angle_system(const tri::Triangulation& t) { return build_angle_system(t, tri::build_skeleton(t)); }

AngleSystem build_angle_system(const tri::Triangulation& t, const tri::Skeleton& sk) {
  AngleSystem s;
  s.tet_count = t.size();
  for (std::size_t x = 0; x < t.size(); ++x) {
    std::vector<int> row(s.cols(), 0);
    for (int k = 0; k < 3; ++k) row[3 * x + static_cast<std::size_t>(k)] = 1;
    s.matrix.push_back(row);
    s.rhs.push_back(1);
  }
  for (const auto& e : sk.edges) {
    if (e.boundary) continue;
    std::vector<int> row(s.cols(), 0);
    for (const auto& c : e.corners) ++row[3 * c.tet + static_cast<std::size_t>(tri::slot_of(c.a, c.b))];
    s.edge_rows.push_back(e.index);
    s.matrix.push_back(row);
    s.rhs.push_back(2);
  }
  return s;
}

bool satisfies(const AngleSystem& s, const AngleVector& x) {
  if (x.size() != s.cols()) return false;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    mpq_class sum = 0;
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (s.matrix[i][j]) sum += s.matrix[i][j] * x[j];
    if (sum != s.rhs[i]) return false;
  }
  return true;
}

bool is_semi(const AngleVector& x) {
  return std::all_of(x.begin(), x.end(), [](const mpq_class& v) { return v >= 0; });
}
bool is_strict(const AngleVector& x) {
  return std::all_of(x.begin(), x.end(), [](const mpq_class& v) { return v > 0; });
}
bool is_taut(const AngleVector& x) {
  return std::all_of(x.begin(), x.end(), [](const mpq_class& v) { return v == 0 || v == 1; });
}

LPOutcome solve_angle_lp(const tri::Triangulation& t, Mode mode) {
  tri::require_valid(t, tri::GlueMode::closed);
  return solve_angle_lp(build_angle_system(t), mode);
}

LPOutcome solve_angle_lp(const AngleSystem& s, Mode mode) {
  const std::size_t n = s.cols();
  lp::Mat A;
  lp::Vec b;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    lp::Vec row(n, 0);
    for (std::size_t j = 0; j < n; ++j) row[j] = s.matrix[i][j];
    A.push_back(row);
    b.push_back(s.rhs[i]);
  }
  LPOutcome out;
  lp::Result semi = lp::maximize(A, b, lp::Vec(n, 0));
  if (semi.status == lp::Status::unbounded) throw std::logic_error("angle LP unbounded");
  if (semi.status == lp::Status::infeasible) return out;
  if (mode == Mode::semi) {
    out.feasible = true;
    out.witness = semi.x;
    return out;
  }
  // x = y + t(1,...,1): A y + t A1 = b, maximize t.
  lp::Mat A2 = A;
  for (auto& row : A2) {
    mpq_class sum = 0;
    for (const auto& v : row) sum += v;
    row.push_back(sum);
  }
  lp::Vec c(n + 1, 0);
  c[n] = 1;
  lp::Result strict = lp::maximize(A2, b, c);
  if (strict.status != lp::Status::optimal) throw std::logic_error("strict angle LP did not reach an optimum");
  AngleVector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = strict.x[j] + strict.value;
  out.optimum = strict.value;
  out.witness = x;
  out.feasible = strict.value > 0;
  return out;
}

std::vector<AngleVector> enumerate_taut(const tri::Triangulation& t, std::size_t limit) {
  tri::require_valid(t, tri::GlueMode::closed);
  const tri::Skeleton sk = tri::build_skeleton(t);
  const std::size_t n = t.size();
  // inc[x][slot] = list of (edge, count) for interior edges.
  std::vector<std::array<std::vector<std::pair<std::size_t, int>>, 3>> inc(n);
  std::vector<std::vector<int>> cap(sk.edges.size(), std::vector<int>(n, 0));
  for (const auto& e : sk.edges) {
    if (e.boundary) continue;
    std::vector<std::array<int, 3>> cnt(n, {0, 0, 0});
    for (const auto& c : e.corners) ++cnt[c.tet][static_cast<std::size_t>(tri::slot_of(c.a, c.b))];
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t s = 0; s < 3; ++s)
        if (cnt[x][s]) inc[x][s].push_back({e.index, cnt[x][s]});
      cap[e.index][x] = std::max({cnt[x][0], cnt[x][1], cnt[x][2]});
    }
  }
  std::vector<int> sum(sk.edges.size(), 0), remaining(sk.edges.size(), 0);
  for (const auto& e : sk.edges)
    for (std::size_t x = 0; x < n; ++x) remaining[e.index] += cap[e.index][x];

  std::vector<AngleVector> out;
  std::vector<int> choice(n, 0);
  auto ok = [&](std::size_t x) {
    for (const auto& e : sk.edges) {
      if (e.boundary) continue;
      if (sum[e.index] > 2 || sum[e.index] + remaining[e.index] < 2) return false;
    }
    (void)x;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t x) -> void {
    if (out.size() >= limit) return;
    if (x == n) {
      out.push_back(taut_vector(choice));
      return;
    }
    for (const auto& e : sk.edges) remaining[e.index] -= cap[e.index][x];
    for (int s = 0; s < 3 && out.size() < limit; ++s) {
      for (auto [e, k] : inc[x][static_cast<std::size_t>(s)]) sum[e] += k;
      choice[x] = s;
      if (ok(x)) self(self, x + 1);
      for (auto [e, k] : inc[x][static_cast<std::size_t>(s)]) sum[e] -= k;
    }
    for (const auto& e : sk.edges) remaining[e.index] += cap[e.index][x];
  };
  rec(rec, 0);
  return out;
}

std::vector<int> taut_slots(const AngleVector& x) {
  std::vector<int> s;
  for (std::size_t i = 0; i + 2 < x.size(); i += 3) {
    int k = x[i] == 1 ? 0 : x[i + 1] == 1 ? 1 : x[i + 2] == 1 ? 2 : -1;
    if (k < 0) throw std::invalid_argument("not a taut vector");
    s.push_back(k);
  }
  return s;
}

AngleVector taut_vector(const std::vector<int>& slots) {
  AngleVector v(3 * slots.size(), 0);
  for (std::size_t x = 0; x < slots.size(); ++x) v[3 * x + static_cast<std::size_t>(slots[x])] = 1;
  return v;
}

mpq_class formal_gauss_bonnet(const std::vector<mpq_class>& corner_angles, std::size_t n) {
  if (n < 3) throw std::invalid_argument("a disc needs at least 3 corners");
  if (corner_angles.size() != n) throw std::invalid_argument("corner count does not match the angle list");
  mpq_class sum = 0;
  for (const auto& a : corner_angles) sum += a;
  return sum - mpq_class(static_cast<long>(n) - 2);
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

}  // namespace esstri::angles
