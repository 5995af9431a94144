#include <doctest.h>

#include <numeric>
#include <random>

#include "esstri/angles.hpp"
#include "esstri/io.hpp"
#include "esstri/lp.hpp"
#include "esstri/moves.hpp"
#include "fixtures.hpp"

using namespace esstri;
using angles::AngleVector;
using angles::Mode;

namespace {

std::vector<int> edge_row_sums(const angles::AngleSystem& s) {
  std::vector<int> out;
  for (std::size_t i = s.tet_count; i < s.rows(); ++i)
    out.push_back(std::accumulate(s.matrix[i].begin(), s.matrix[i].end(), 0));
  return out;
}

// Brute force over column subsets: every basic feasible solution of
// A x = b, x >= 0, best objective value.  Independent of the simplex code.
std::optional<mpq_class> brute_force_max(const lp::Mat& A, const lp::Vec& b, const lp::Vec& c) {
  const std::size_t m = A.size(), n = c.size();
  std::optional<mpq_class> best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1u) cols.push_back(j);
    // Solve A[:,cols] y = b by Gaussian elimination; accept unique solutions.
    lp::Mat M(m, lp::Vec(cols.size() + 1));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < cols.size(); ++k) M[i][k] = A[i][cols[k]];
      M[i][cols.size()] = b[i];
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t k = 0; k < cols.size() && r < m; ++k) {
      std::size_t p = r;
      while (p < m && M[p][k] == 0) ++p;
      if (p == m) continue;
      std::swap(M[p], M[r]);
      for (std::size_t i = 0; i < m; ++i) {
        if (i == r || M[i][k] == 0) continue;
        mpq_class f = M[i][k] / M[r][k];
        for (std::size_t j = 0; j <= cols.size(); ++j) M[i][j] -= f * M[r][j];
      }
      pivcol.push_back(k);
      ++r;
    }
    if (pivcol.size() != cols.size()) continue;
    bool consistent = true;
    for (std::size_t i = r; i < m; ++i)
      if (M[i][cols.size()] != 0) consistent = false;
    if (!consistent) continue;
    lp::Vec x(n, 0);
    bool nonneg = true;
    for (std::size_t i = 0; i < r; ++i) {
      x[cols[pivcol[i]]] = M[i][cols.size()] / M[i][pivcol[i]];
      if (x[cols[pivcol[i]]] < 0) nonneg = false;
    }
    if (!nonneg) continue;
    mpq_class v = 0;
    for (std::size_t j = 0; j < n; ++j) v += c[j] * x[j];
    if (!best || v > *best) best = v;
  }
  return best;
}

const char* degree_one_text =
    "tets: 2\n"
    "0: 1 (032) | 1 (132) | 0 (123) | 0 (023)\n"
    "1: 1 (013) | 1 (012) | 0 (021) | 0 (031)\n";

}  // namespace

TEST_CASE("angle system shapes") {
  auto f8 = angles::build_angle_system(fixtures::fig8());
  CHECK(f8.rows() == 4);
  CHECK(f8.cols() == 6);
  CHECK(edge_row_sums(f8) == std::vector<int>{6, 6});

  auto m = angles::build_angle_system(fixtures::m136());
  CHECK(m.rows() == 14);
  CHECK(m.cols() == 21);
  CHECK(edge_row_sums(m) == std::vector<int>{4, 4, 10, 10, 6, 4, 4});

  tri::Triangulation one(1);
  auto s = angles::build_angle_system(one);
  CHECK(s.rows() == 1);
  CHECK(s.matrix[0] == std::vector<int>{1, 1, 1});
  CHECK(s.rhs[0] == 1);
}

TEST_CASE("strict LP on the figure-8") {
  auto out = angles::solve_angle_lp(fixtures::fig8(), Mode::strict);
  REQUIRE(out.optimum.has_value());
  CHECK(*out.optimum == mpq_class(1, 3));
  CHECK(out.feasible);
  CHECK(*out.witness == AngleVector(6, mpq_class(1, 3)));
  CHECK(angles::satisfies(angles::build_angle_system(fixtures::fig8()), *out.witness));
}

TEST_CASE("m136 has no strict structure but is taut") {
  auto m = fixtures::m136();
  auto strict = angles::solve_angle_lp(m, Mode::strict);
  REQUIRE(strict.optimum.has_value());
  CHECK(*strict.optimum == 0);
  CHECK_FALSE(strict.feasible);
  CHECK(angles::satisfies(angles::build_angle_system(m), *strict.witness));
  auto semi = angles::solve_angle_lp(m, Mode::semi);
  CHECK(semi.feasible);
  CHECK(angles::is_semi(*semi.witness));

  auto taut = angles::enumerate_taut(m, 100);
  REQUIRE(!taut.empty());
  auto sys = angles::build_angle_system(m);
  for (const auto& x : taut) {
    CHECK(angles::satisfies(sys, x));
    CHECK(angles::is_taut(x));
  }
  // Deterministic lexicographic order.
  for (std::size_t i = 1; i < taut.size(); ++i) CHECK(angles::taut_slots(taut[i - 1]) < angles::taut_slots(taut[i]));
}

TEST_CASE("degree-1 and degree-2 edges block structures") {
  auto t = tri::parse_triangulation(degree_one_text);
  auto sk = tri::build_skeleton(t);
  CHECK(std::any_of(sk.edges.begin(), sk.edges.end(), [](const auto& e) { return e.degree() == 1; }));
  CHECK(angles::enumerate_taut(t, 10).empty());

  auto m = fixtures::m136();
  auto site = moves::pillow_sites(m, 0).front();
  auto p = moves::pillow_0_2(m, 0, site);
  auto out = angles::solve_angle_lp(p.tri, Mode::strict);
  CHECK_FALSE(out.feasible);
  CHECK(out.optimum == mpq_class(0));
}

TEST_CASE("simplex against brute force") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + trial % 3, n = 3 + trial % 4;
    lp::Mat A(m, lp::Vec(n));
    lp::Vec b(m), c(n);
    for (auto& row : A)
      for (auto& v : row) v = coef(rng);
    for (auto& v : b) v = coef(rng);
    for (auto& v : c) v = coef(rng);
    // Bound the region so brute force sees every optimum.
    A.push_back(lp::Vec(n, 1));
    b.push_back(5);
    auto got = lp::maximize(A, b, c);
    auto want = brute_force_max(A, b, c);
    CHECK(got.status != lp::Status::unbounded);
    CHECK((got.status == lp::Status::optimal) == want.has_value());
    if (want && got.status == lp::Status::optimal) {
      CHECK(got.value == *want);
      for (std::size_t i = 0; i < A.size(); ++i) {
        mpq_class s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[i][j] * got.x[j];
        CHECK(s == b[i]);
      }
    }
  }
}

TEST_CASE("LP witnesses on random triangulations have zero residual") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = fixtures::random_closed(rng, 1 + trial % 5, true);
    auto sys = angles::build_angle_system(t);
    for (Mode mode : {Mode::semi, Mode::strict}) {
      auto out = angles::solve_angle_lp(sys, mode);
      if (out.witness) {
        CHECK(angles::satisfies(sys, *out.witness));
        CHECK(angles::is_semi(*out.witness));
      }
    }
    auto semi = angles::solve_angle_lp(sys, Mode::semi);
    for (const auto& x : angles::enumerate_taut(t, 5)) {
      CHECK(angles::satisfies(sys, x));
      CHECK(semi.feasible);
    }
  }
}

TEST_CASE("formal Gauss-Bonnet") {
  const mpq_class a(1, 5), b(3, 10), g(1, 2);
  CHECK(angles::formal_gauss_bonnet({a, b, g}, 3) == 0);
  CHECK(angles::formal_gauss_bonnet({a, b, a, b}, 4) == -2 * g);
  CHECK(angles::formal_gauss_bonnet({a, a, a, a, b, b, g, g}, 8) == 2 * (a - 2));
  CHECK_THROWS(angles::formal_gauss_bonnet({a, b}, 2));
  CHECK_THROWS(angles::formal_gauss_bonnet({a, b, g}, 4));

  // Vertex-linking torus of m136 under a semi-angle structure: total 0.
  auto m = fixtures::m136();
  auto sk = tri::build_skeleton(m);
  auto x = *angles::solve_angle_lp(m, Mode::semi).witness;
  mpq_class total = 0;
  for (const auto& tr : sk.vertices[0].triangles) {
    std::vector<mpq_class> corners;
    for (int w = 0; w < 4; ++w)
      if (w != static_cast<int>(tr[1])) corners.push_back(x[3 * tr[0] + tri::slot_of(static_cast<int>(tr[1]), w)]);
    total += angles::formal_gauss_bonnet(corners, 3);
  }
  CHECK(total == 0);
}
