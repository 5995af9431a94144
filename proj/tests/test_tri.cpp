#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "esstri/io.hpp"
#include "esstri/skeleton.hpp"
#include "fixtures.hpp"

using namespace esstri::tri;

TEST_CASE("Perm4 forms a group on all 24 elements") {
  const auto& all = Perm4::all();
  std::set<Perm4> distinct(all.begin(), all.end());
  CHECK(distinct.size() == 24);
  const Perm4 id;
  int odd = 0;
  for (const auto& p : all) {
    CHECK(p * p.inverse() == id);
    CHECK(p.inverse() * p == id);
    CHECK(p * id == p);
    if (p.sign() < 0) ++odd;
    for (const auto& q : all) {
      CHECK(distinct.count(p * q) == 1);
      CHECK((p * q).sign() == p.sign() * q.sign());
      CHECK((p * q).inverse() == q.inverse() * p.inverse());
      for (int v = 0; v < 4; ++v) CHECK((p * q)[v] == p[q[v]]);
    }
  }
  CHECK(odd == 12);
  const int bad[] = {0, 1, 1, 3};
  CHECK_FALSE(Perm4::from_images(bad).has_value());
}

TEST_CASE("table rows decode into face gluings") {
  Triangulation t = fixtures::m136();
  REQUIRE(t.size() == 7);
  // Face 012 of tet 0 -> tet 1 with 0->3, 1->1, 2->2, 3->0.
  REQUIRE(t.gluing(0, 3).has_value());
  CHECK(t.gluing(0, 3)->tet == 1);
  CHECK(t.gluing(0, 3)->perm == Perm4(3, 1, 2, 0));
  // Face 123 of tet 1 -> tet 0; the inverse of the involution above.
  REQUIRE(t.gluing(1, 0).has_value());
  CHECK(t.gluing(1, 0)->tet == 0);
  CHECK(t.gluing(1, 0)->perm == Perm4(3, 1, 2, 0));
  CHECK(t.gluing(1, 0)->perm == t.gluing(0, 3)->perm.inverse());
}

TEST_CASE("empty document") {
  Triangulation t = parse_triangulation("tets: 0\n");
  CHECK(t.size() == 0);
  CHECK(validate(t).ok());
  Skeleton sk = build_skeleton(t);
  CHECK(sk.edges.empty());
  CHECK(sk.vertices.empty());
}

TEST_CASE("parse errors carry positions") {
  SUBCASE("syntax") {
    try {
      parse_table("tets: 1\n0: 0 (123 | - | - | -\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() > 1);
    }
  }
  SUBCASE("label out of range") {
    CHECK_THROWS_AS(parse_table("tets: 1\n0: 0 (124) | - | - | -\n"), ParseError);
    CHECK_THROWS_AS(parse_table("tets: 1\n0: 3 (123) | - | - | -\n"), ParseError);
  }
  SUBCASE("duplicate face assignment") {
    CHECK_THROWS_AS(parse_table("tets: 2\n0: - | - | - | -\n0: - | - | - | -\n1: - | - | - | -\n"), ParseError);
    // Two faces of tet 0 both claim face 3 of tet 1.
    CHECK_THROWS_AS(parse_table("tets: 2\n0: 1 (012) | 1 (012) | - | -\n1: - | - | - | -\n"), ParseError);
  }
  SUBCASE("json") {
    CHECK_THROWS_AS(parse_json("{\"tets\": 1, \"gluings\": [[null, null]]}"), ParseError);
    CHECK_THROWS_AS(parse_json("{\"tets\": 1, "), ParseError);
  }
}

TEST_CASE("validate reports violations") {
  CHECK(validate(fixtures::m136()).ok());
  Triangulation lone(1);
  auto report = validate(lone);
  CHECK(report.violations.size() == 4);
  for (const auto& v : report.violations) CHECK(v.kind == ViolationKind::unglued_face);
  CHECK(validate(lone, GlueMode::boundary).ok());

  Triangulation broken = fixtures::m136();
  // (0,3) -> (1, [3,1,2,0]) but (1,0) now points elsewhere.
  broken.set_one_side(1, 0, Gluing{2, Perm4(3, 1, 2, 0)});
  report = validate(broken);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.kind == ViolationKind::mutual_inverse && v.where == FaceRef{0, 3}) {
      found = true;
      CHECK(v.message.find("mutual inverse violated at (0,3)") != std::string::npos);
    }
  CHECK(found);

  Triangulation self(1);
  self.set_one_side(0, 1, Gluing{0, Perm4(0, 1, 3, 2)});
  report = validate(self, GlueMode::boundary);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::self_identified_face);
}

TEST_CASE("m136 skeleton reproduces the tabulated edge cycles") {
  Skeleton sk = build_skeleton(fixtures::m136());
  REQUIRE(sk.edges.size() == 7);
  const std::vector<std::size_t> degrees{4, 4, 10, 10, 6, 4, 4};
  auto table = fixtures::m136_edge_table();
  for (std::size_t e = 0; e < 7; ++e) {
    CHECK(sk.edges[e].degree() == degrees[e]);
    CHECK(same_cycle(sk.edges[e].corners, table[e]));
    CHECK(sk.edges[e].valid);
  }
  CHECK(sk.faces.size() == 14);
  REQUIRE(sk.vertices.size() == 1);
  CHECK(sk.vertices[0].euler_characteristic == 0);
  CHECK(sk.vertices[0].orientable);
  CHECK(sk.vertices[0].kind == SurfaceKind::torus);
  CHECK(sk.classification == Classification::ideal_all_torus_or_klein);
  // V - E + F - T of the end-compactification: one torus-link vertex gives 1.
  CHECK(sk.euler_characteristic() == 1);
}

TEST_CASE("canonical cycles start at the least corner") {
  Skeleton sk = build_skeleton(fixtures::m136());
  for (const auto& e : sk.edges) {
    const auto& c = e.corners;
    CHECK(c.front().a < c.front().b);
    for (const auto& x : c) {
      Corner asc{x.tet, std::min(x.a, x.b), std::max(x.a, x.b)};
      CHECK_FALSE(asc < c.front());
    }
    if (c.size() > 2) {
      Corner second = c[1];
      Corner last = c.back();
      CHECK_FALSE(last < second);
    }
  }
  // Edge 0 in canonical form.
  std::vector<Corner> expect{{0, 0, 1}, {1, 3, 1}, {2, 2, 1}, {4, 3, 0}};
  CHECK(sk.edges[0].corners == expect);
}

TEST_CASE("single tetrahedron in boundary mode") {
  Triangulation lone(1);
  Skeleton sk = build_skeleton(lone);
  CHECK(sk.edges.size() == 6);
  CHECK(sk.faces.size() == 4);
  CHECK(sk.vertices.size() == 4);
  for (const auto& e : sk.edges) {
    CHECK(e.boundary);
    CHECK(e.degree() == 1);
  }
  for (const auto& v : sk.vertices) {
    CHECK(v.has_boundary);
    CHECK(v.euler_characteristic == 1);
  }
  CHECK(sk.classification == Classification::pseudo_manifold_other);
}

TEST_CASE("isomorphism search") {
  Triangulation m = fixtures::m136();
  auto self = are_isomorphic(m, m);
  REQUIRE(self.has_value());
  CHECK(is_isomorphism(m, m, *self));

  // Cyclic shift of tet labels plus a vertex relabeling of one tet.
  Isomorphism shift;
  for (std::size_t t = 0; t < m.size(); ++t) {
    shift.tet_map.push_back((t + 1) % m.size());
    shift.vertex_maps.push_back(t == 2 ? Perm4(2, 0, 3, 1) : Perm4());
  }
  Triangulation moved = apply_isomorphism(m, shift);
  CHECK(validate(moved).ok());
  auto found = are_isomorphic(m, moved);
  REQUIRE(found.has_value());
  CHECK(is_isomorphism(m, moved, *found));

  Triangulation two(2);
  two.glue(0, 0, 1, Perm4(1, 0, 2, 3).inverse() * Perm4());
  CHECK_FALSE(are_isomorphic(m, two).has_value());
}

TEST_CASE("relabeling preserves the skeleton and orientation data") {
  Triangulation m = fixtures::m136();
  CHECK(is_oriented(m));
  Triangulation r = m;
  r.relabel_tet(3, Perm4::swap(2, 3));
  CHECK(validate(r).ok());
  CHECK_FALSE(is_oriented(r));
  auto fixed = oriented_copy(r);
  REQUIRE(fixed.has_value());
  CHECK(is_oriented(*fixed));
  CHECK(are_isomorphic(m, r).has_value());
}

TEST_CASE("random closed triangulations satisfy skeleton invariants") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    Triangulation t = fixtures::random_closed(rng, n, trial % 2 == 0);
    REQUIRE(validate(t).ok());
    Skeleton sk = build_skeleton(t);
    std::size_t total = 0;
    for (const auto& e : sk.edges) {
      CHECK(e.degree() >= 1);
      total += e.degree();
      for (std::size_t i = 0; i < e.steps.size(); ++i) {
        // Consecutive corners are related by the face gluing leaving i.
        const auto& s = e.steps[i];
        const auto& nxt = e.steps[(i + 1) % e.steps.size()];
        const auto& g = t.gluing(s.tet, s.d);
        REQUIRE(g.has_value());
        if (e.valid) {
          CHECK(g->tet == nxt.tet);
          CHECK(g->perm[s.a] == nxt.a);
          CHECK(g->perm[s.b] == nxt.b);
        }
      }
      if (e.valid) {
        auto tr = trace_edge(t, e.steps[0].tet, e.steps[0].a, e.steps[0].b);
        CHECK(tr.returned_identity);
      }
    }
    CHECK(total == 6 * n);
    CHECK(sk.faces.size() == 2 * n);
    std::map<std::pair<std::size_t, int>, int> edge_hits;
    for (const auto& e : sk.edges)
      for (const auto& c : e.corners) ++edge_hits[{c.tet, edge_index(c.a, c.b)}];
    CHECK(edge_hits.size() == 6 * n);
    // chi(M) = sum over vertices of (1 - chi(link)/2) when all edges are valid.
    if (sk.all_edges_valid()) {
      long twice = 0;
      for (const auto& v : sk.vertices) twice += 2 - v.euler_characteristic;
      CHECK(2 * sk.euler_characteristic() == twice);
    }
    std::size_t triangles = 0;
    for (const auto& v : sk.vertices) {
      triangles += v.triangle_count;
      if (v.kind == SurfaceKind::sphere) CHECK((v.orientable && v.euler_characteristic == 2));
      if (v.kind == SurfaceKind::torus) CHECK((v.orientable && v.euler_characteristic == 0));
      if (v.kind == SurfaceKind::klein_bottle) CHECK((!v.orientable && v.euler_characteristic == 0));
    }
    CHECK(triangles == 4 * n);

    // Invariance under tetrahedron relabeling.
    Isomorphism perm;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t x = 0; x < n; ++x) {
      perm.tet_map.push_back(order[x]);
      perm.vertex_maps.push_back(Perm4::all()[rng() % 24]);
    }
    Skeleton sk2 = build_skeleton(apply_isomorphism(t, perm));
    CHECK(sk2.edges.size() == sk.edges.size());
    CHECK(sk2.vertices.size() == sk.vertices.size());
    std::vector<std::size_t> d1, d2;
    for (const auto& e : sk.edges) d1.push_back(e.degree());
    for (const auto& e : sk2.edges) d2.push_back(e.degree());
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    CHECK(d1 == d2);
  }
}

TEST_CASE("table and json round trip") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Triangulation t = fixtures::random_closed(rng, 1 + static_cast<std::size_t>(trial % 5), false);
    if (trial % 3 == 0) t.unglue(0, 1);
    CHECK(parse_table(to_table(t)) == t);
    CHECK(parse_json(to_json(t)) == t);
    CHECK(to_json(parse_json(to_json(t))) == to_json(t));
  }
}
