#include <doctest.h>

#include <algorithm>
#include <random>

#include "esstri/moves.hpp"
#include "esstri/pi1.hpp"
#include "fixtures.hpp"

using namespace esstri;
using moves::MoveError;
using tri::Perm4;
using tri::Triangulation;

namespace {

std::vector<tri::SurfaceKind> link_kinds(const tri::Skeleton& sk) {
  std::vector<tri::SurfaceKind> k;
  for (const auto& v : sk.vertices) k.push_back(v.kind);
  std::sort(k.begin(), k.end());
  return k;
}

void check_invariants(const Triangulation& before, const Triangulation& after) {
  CHECK(tri::validate(after, before.is_closed() ? tri::GlueMode::closed : tri::GlueMode::boundary).ok());
  auto a = tri::build_skeleton(before), b = tri::build_skeleton(after);
  CHECK(a.euler_characteristic() == b.euler_characteristic());
  CHECK(link_kinds(a) == link_kinds(b));
  if (before.is_closed())
    CHECK(pi1::homology(pi1::presentation_spine(before).pres) == pi1::homology(pi1::presentation_spine(after).pres));
  if (tri::is_oriented(before)) CHECK(tri::is_oriented(after));
}

std::size_t face_class_between(const Triangulation& t, std::size_t x, std::size_t y) {
  auto sk = tri::build_skeleton(t);
  for (const auto& fc : sk.faces)
    if (fc.reps.size() == 2 && ((fc.reps[0].tet == x && fc.reps[1].tet == y) || (fc.reps[0].tet == y && fc.reps[1].tet == x)))
      return fc.index;
  FAIL("no face between the tetrahedra");
  return 0;
}

}  // namespace

TEST_CASE("2-3 on two tetrahedra sharing one face") {
  Triangulation t(2);
  t.glue(0, 3, 1, Perm4(0, 1, 2, 3));
  auto r = moves::pachner_2_3(t, face_class_between(t, 0, 1));
  CHECK(r.tri.size() == 3);
  CHECK(tri::validate(r.tri, tri::GlueMode::boundary).ok());
  auto sk = tri::build_skeleton(r.tri);
  REQUIRE(r.record.created_edges.size() == 1);
  const auto& e = sk.edges[r.record.created_edges[0]];
  CHECK(e.degree() == 3);
  CHECK_FALSE(e.boundary);
  std::size_t interior = std::count_if(sk.edges.begin(), sk.edges.end(), [](const auto& x) { return !x.boundary; });
  CHECK(interior == 1);
  CHECK(r.tri.boundary_face_count() == 6);
}

TEST_CASE("2-3 then 3-2 on the figure-8 returns the input") {
  Triangulation f8 = fixtures::fig8();
  auto sk = tri::build_skeleton(f8);
  for (const auto& fc : sk.faces) {
    auto up = moves::pachner_2_3(f8, fc.index);
    CHECK(up.tri.size() == 3);
    check_invariants(f8, up.tri);
    auto down = moves::pachner_3_2(up.tri, up.record.created_edges.at(0));
    CHECK(down.tri.size() == 2);
    auto iso = tri::are_isomorphic(f8, down.tri);
    REQUIRE(iso.has_value());
    CHECK(tri::is_isomorphism(f8, down.tri, *iso));
  }
}

TEST_CASE("2-3 on m136 between tets 3 and 5") {
  Triangulation m = fixtures::m136();
  auto r = moves::pachner_2_3(m, face_class_between(m, 3, 5));
  CHECK(r.tri.size() == 8);
  CHECK(tri::build_skeleton(r.tri).classification == tri::Classification::ideal_all_torus_or_klein);
  check_invariants(m, r.tri);
  auto back = moves::pachner_3_2(r.tri, r.record.created_edges.at(0));
  CHECK(tri::are_isomorphic(m, back.tri).has_value());
}

TEST_CASE("move preconditions") {
  Triangulation m = fixtures::m136();
  CHECK_THROWS_AS(moves::pachner_3_2(m, 0), MoveError);  // degree 4
  CHECK_THROWS_AS(moves::pachner_2_3(m, 999), MoveError);
  // A face glued to another face of the same tetrahedron.
  Triangulation s(1);
  s.glue(0, 0, 0, Perm4(1, 0, 2, 3));
  CHECK_THROWS_AS(moves::pachner_2_3(s, 0), MoveError);
  CHECK_THROWS_AS(moves::pillow_0_2(m, 0, {1, 1}), MoveError);
}

TEST_CASE("random 2-3 / 3-2 round trips") {
  std::mt19937 rng(7);
  int trips = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + trial % 6;
    Triangulation t = fixtures::random_closed(rng, n, trial % 2 == 0);
    auto sk = tri::build_skeleton(t);
    for (const auto& fc : sk.faces) {
      if (fc.reps[0].tet == fc.reps[1].tet) {
        CHECK_THROWS_AS(moves::pachner_2_3(t, fc.index), MoveError);
        continue;
      }
      auto up = moves::pachner_2_3(t, fc.index);
      check_invariants(t, up.tri);
      auto down = moves::pachner_3_2(up.tri, up.record.created_edges.at(0));
      check_invariants(t, down.tri);
      CHECK(tri::are_isomorphic(t, down.tri).has_value());
      ++trips;
    }
  }
  CHECK(trips > 100);
}

TEST_CASE("pillow on every site of m136") {
  Triangulation m = fixtures::m136();
  auto sk = tri::build_skeleton(m);
  std::size_t sites = 0;
  for (const auto& e : sk.edges) {
    for (auto site : moves::pillow_sites(m, e.index)) {
      auto r = moves::pillow_0_2(m, e.index, site);
      ++sites;
      CHECK(r.tri.size() == m.size() + 2);
      check_invariants(m, r.tri);
      auto out = tri::build_skeleton(r.tri);
      CHECK(out.edges.size() == sk.edges.size() + 2);
      REQUIRE(r.record.created_edges.size() == 3);
      CHECK(out.edges[r.record.created_edges[0]].degree() == 2);
      // The halves gain the pillow's ab corners; a face containing e twice
      // adds further pillow corners to them.
      CHECK(r.record.created_edges[1] != r.record.created_edges[2]);
      CHECK(out.edges[r.record.created_edges[1]].degree() + out.edges[r.record.created_edges[2]].degree() >=
            e.degree() + 2);
    }
  }
  CHECK(sites > 0);
}
