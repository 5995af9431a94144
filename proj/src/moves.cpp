#include "esstri/moves.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace esstri::moves {

using tri::EdgeStep;
using tri::Gluing;
using tri::Skeleton;

namespace {

// Face g of new tet `tet` sits where face pi[g] of old tet `old` was; pi
// sends new labels to old labels.
struct OuterFace {
  std::size_t tet;
  int face;
  std::size_t old;
  Perm4 pi;
};

struct InnerGlue {
  std::size_t tet;
  int face;
  std::size_t tet2;
  Perm4 perm;
};

Perm4 perm_from(int i0, int i1, int i2, int i3) { return Perm4(i0, i1, i2, i3); }

// Perm sending x->0, y->1, z->2, w->3.
Perm4 to_standard(int x, int y, int z, int w) {
  std::array<int, 4> img{};
  img[static_cast<std::size_t>(x)] = 0;
  img[static_cast<std::size_t>(y)] = 1;
  img[static_cast<std::size_t>(z)] = 2;
  img[static_cast<std::size_t>(w)] = 3;
  return Perm4(img[0], img[1], img[2], img[3]);
}

int relabel_slot(int slot, Perm4 p) {
  static constexpr std::array<std::array<int, 2>, 3> pair{{{0, 1}, {0, 2}, {0, 3}}};
  auto [x, y] = pair[static_cast<std::size_t>(slot)];
  return tri::slot_of(p[x], p[y]);
}

// Removes `removed`, appends `fresh` new tets and rewires.
Triangulation rebuild(const Triangulation& t, const std::vector<std::size_t>& removed, std::size_t fresh,
                      const std::vector<OuterFace>& outer, const std::vector<InnerGlue>& inner,
                      std::vector<std::optional<std::size_t>>& tet_map, std::size_t& first_new) {
  std::vector<bool> gone(t.size(), false);
  for (std::size_t x : removed) gone[x] = true;
  tet_map.assign(t.size(), std::nullopt);
  std::size_t next = 0;
  for (std::size_t x = 0; x < t.size(); ++x)
    if (!gone[x]) tet_map[x] = next++;
  first_new = next;
  Triangulation out(next + fresh);
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (gone[x]) continue;
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(x, f);
      if (g && !gone[g->tet]) out.set_one_side(*tet_map[x], f, Gluing{*tet_map[g->tet], g->perm});
    }
  }
  std::map<std::pair<std::size_t, int>, const OuterFace*> at;
  for (const OuterFace& o : outer) at[{o.old, o.pi[o.face]}] = &o;
  for (const OuterFace& o : outer) {
    const int old_face = o.pi[o.face];
    const auto& g = t.gluing(o.old, old_face);
    if (!g) continue;
    const std::size_t n = first_new + o.tet;
    if (!gone[g->tet]) {
      out.glue(n, o.face, *tet_map[g->tet], g->perm * o.pi);
      continue;
    }
    auto it = at.find({g->tet, g->perm[old_face]});
    if (it == at.end()) throw MoveError("internal: unmatched face during rewiring");
    const OuterFace& o2 = *it->second;
    out.glue(n, o.face, first_new + o2.tet, o2.pi.inverse() * g->perm * o.pi);
  }
  for (const InnerGlue& ig : inner) out.glue(first_new + ig.tet, ig.face, first_new + ig.tet2, ig.perm);
  out.set_label(t.label());
  return out;
}

// Restores the all-odd gluing convention when the input had it.
void restore_orientation(const Triangulation& input, MoveResult& r) {
  r.record.relabel.assign(r.tri.size(), Perm4());
  if (!tri::is_oriented(input)) return;
  auto signs = tri::orientation_signs(r.tri);
  if (!signs) throw MoveError("internal: move produced a non-orientable triangulation");
  for (std::size_t x = 0; x < r.tri.size(); ++x) {
    if ((*signs)[x] > 0) continue;
    r.tri.relabel_tet(x, Perm4::swap(2, 3));
    r.record.relabel[x] = Perm4::swap(2, 3);
    if (r.taut) (*r.taut)[x] = relabel_slot((*r.taut)[x], Perm4::swap(2, 3));
  }
}

std::size_t edge_class_of(const Triangulation& t, const MoveResult& r, std::size_t tet, int a, int b) {
  Skeleton sk = tri::build_skeleton(t);
  const Perm4 p = r.record.relabel[tet];
  return sk.edge_of[tet][static_cast<std::size_t>(tri::edge_index(p[a], p[b]))].edge;
}

const tri::EdgeClass& checked_edge(const Skeleton& sk, std::size_t edge_class) {
  if (edge_class >= sk.edges.size())
    throw MoveError("edge class " + std::to_string(edge_class) + " out of range");
  const auto& e = sk.edges[edge_class];
  if (e.boundary || !e.valid) throw MoveError("edge class " + std::to_string(edge_class) + " is not an interior edge");
  return e;
}

}  // namespace

MoveResult pachner_2_3(const Triangulation& t, std::size_t face_class) {
  tri::require_valid(t, tri::GlueMode::boundary);
  Skeleton sk = tri::build_skeleton(t);
  if (face_class >= sk.faces.size()) throw MoveError("face class " + std::to_string(face_class) + " out of range");
  const auto& fc = sk.faces[face_class];
  if (fc.reps.size() != 2) throw MoveError("2-3 move needs an interior face");
  const std::size_t t0 = fc.reps[0].tet, t1 = fc.reps[1].tet;
  if (t0 == t1) throw MoveError("2-3 move undefined on a face glued to its own tetrahedron");
  const int f0 = fc.reps[0].face;
  const Perm4 s = t.gluing(t0, f0)->perm;
  std::array<int, 3> x{};
  for (int v = 0, k = 0; v < 4; ++v)
    if (v != f0) x[static_cast<std::size_t>(k++)] = v;

  // New tet i has vertices (apex of t0, apex of t1, x[i+1], x[i+2]).
  std::vector<OuterFace> outer;
  std::vector<InnerGlue> inner;
  for (std::size_t i = 0; i < 3; ++i) {
    const int xi = x[i], x1 = x[(i + 1) % 3], x2 = x[(i + 2) % 3];
    outer.push_back({i, 0, t1, perm_from(s[xi], s[f0], s[x1], s[x2])});
    outer.push_back({i, 1, t0, perm_from(f0, xi, x1, x2)});
    inner.push_back({i, 2, (i + 1) % 3, Perm4(0, 1, 3, 2)});
  }
  MoveResult r;
  std::size_t first = 0;
  r.tri = rebuild(t, {t0, t1}, 3, outer, inner, r.record.tet_map, first);
  r.record.kind = MoveKind::two_three;
  r.record.site = face_class;
  r.record.created_tets = {first, first + 1, first + 2};
  restore_orientation(t, r);
  r.record.created_edges = {edge_class_of(r.tri, r, first, 0, 1)};
  return r;
}

MoveResult pachner_3_2(const Triangulation& t, std::size_t edge_class) {
  tri::require_valid(t, tri::GlueMode::boundary);
  Skeleton sk = tri::build_skeleton(t);
  const auto& e = checked_edge(sk, edge_class);
  if (e.degree() != 3) throw MoveError("3-2 move needs an edge of degree 3");
  const auto& st = e.steps;
  if (st[0].tet == st[1].tet || st[1].tet == st[2].tet || st[0].tet == st[2].tet)
    throw MoveError("3-2 move needs three distinct tetrahedra around the edge");

  // Labels 0,1,2 are the link vertices c_i (== d_{i+1}); 3 is the apex.
  // Tet i holds c_i and d_i == c_{i-1}.
  std::vector<OuterFace> outer;
  for (std::size_t i = 0; i < 3; ++i) {
    const EdgeStep& q = st[i];
    const std::size_t prev = (i + 2) % 3, far = (i + 1) % 3;
    std::array<int, 4> up{}, lo{};
    up[i] = lo[i] = q.c;
    up[prev] = lo[prev] = q.d;
    up[3] = q.a;
    up[far] = q.b;
    lo[3] = q.b;
    lo[far] = q.a;
    outer.push_back({0, static_cast<int>(far), q.tet, perm_from(up[0], up[1], up[2], up[3])});
    outer.push_back({1, static_cast<int>(far), q.tet, perm_from(lo[0], lo[1], lo[2], lo[3])});
  }
  MoveResult r;
  std::size_t first = 0;
  r.tri = rebuild(t, {st[0].tet, st[1].tet, st[2].tet}, 2, outer, {{0, 3, 1, Perm4()}}, r.record.tet_map, first);
  r.record.kind = MoveKind::three_two;
  r.record.site = edge_class;
  r.record.created_tets = {first, first + 1};
  restore_orientation(t, r);
  return r;
}

std::vector<PillowSite> pillow_sites(const Triangulation& t, std::size_t edge_class) {
  Skeleton sk = tri::build_skeleton(t);
  const auto& e = checked_edge(sk, edge_class);
  std::vector<PillowSite> out;
  const std::size_t n = e.degree();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const EdgeStep& si = e.steps[i];
      const EdgeStep& sj = e.steps[j];
      if (sk.face_of[si.tet][static_cast<std::size_t>(si.d)][0] != sk.face_of[sj.tet][static_cast<std::size_t>(sj.d)][0])
        out.push_back({i, j});
    }
  return out;
}

namespace {

// Number of π corners in positions first+1 .. second (cyclic).
std::array<int, 2> pi_corners(const tri::EdgeClass& e, PillowSite site, const std::vector<int>& taut) {
  std::array<int, 2> count{0, 0};
  const std::size_t n = e.degree();
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t pos = (site.first + k) % n;
    const EdgeStep& s = e.steps[pos];
    const bool in_first = k <= (site.second + n - site.first) % n;
    if (tri::slot_of(s.a, s.b) == taut.at(s.tet)) ++count[in_first ? 0 : 1];
  }
  return count;
}

}  // namespace

bool taut_extends(const Triangulation& t, std::size_t edge_class, PillowSite site, const std::vector<int>& taut) {
  Skeleton sk = tri::build_skeleton(t);
  const auto& e = checked_edge(sk, edge_class);
  if (taut.size() != t.size()) return false;
  return pi_corners(e, site, taut) == std::array<int, 2>{1, 1};
}

MoveResult pillow_0_2(const Triangulation& t, std::size_t edge_class, PillowSite site,
                      const std::optional<std::vector<int>>& taut) {
  tri::require_valid(t, tri::GlueMode::boundary);
  Skeleton sk = tri::build_skeleton(t);
  const auto& e = checked_edge(sk, edge_class);
  const std::size_t n = e.degree();
  if (site.first > site.second) std::swap(site.first, site.second);
  if (site.first == site.second || site.second >= n) throw MoveError("pillow faces are not two distinct faces of the edge");
  const std::size_t i = site.first, j = site.second;
  const EdgeStep si = e.steps[i], si1 = e.steps[(i + 1) % n];
  const EdgeStep sj = e.steps[j], sj1 = e.steps[(j + 1) % n];
  if (sk.face_of[si.tet][static_cast<std::size_t>(si.d)][0] == sk.face_of[sj.tet][static_cast<std::size_t>(sj.d)][0])
    throw MoveError("pillow faces must be distinct face classes");
  if (taut) {
    if (taut->size() != t.size()) throw MoveError("taut structure has the wrong length");
    if (pi_corners(e, site, *taut) != std::array<int, 2>{1, 1})
      throw MoveError("taut structure does not extend: π corners at the edge are not on opposite sides");
  }

  MoveResult r;
  r.tri = t;
  const std::size_t P = r.tri.add_tets(2), Q = P + 1;
  r.tri.unglue(si.tet, si.d);
  r.tri.unglue(sj.tet, sj.d);
  // Pillow labels: 0 = a, 1 = b, 2 = link vertex of face i, 3 = of face j.
  r.tri.glue(si1.tet, si1.c, P, to_standard(si1.a, si1.b, si1.d, si1.c));
  r.tri.glue(sj.tet, sj.d, P, to_standard(sj.a, sj.b, sj.d, sj.c));
  r.tri.glue(si.tet, si.d, Q, to_standard(si.a, si.b, si.c, si.d));
  r.tri.glue(sj1.tet, sj1.c, Q, to_standard(sj1.a, sj1.b, sj1.c, sj1.d));
  r.tri.glue(P, 0, Q, Perm4());
  r.tri.glue(P, 1, Q, Perm4());

  r.record.kind = MoveKind::zero_two;
  r.record.site = edge_class;
  r.record.created_tets = {P, Q};
  for (std::size_t x = 0; x < t.size(); ++x) r.record.tet_map.push_back(x);
  if (taut) {
    r.taut = *taut;
    r.taut->push_back(0);
    r.taut->push_back(0);
  }
  restore_orientation(t, r);
  r.record.created_edges = {edge_class_of(r.tri, r, P, 2, 3), edge_class_of(r.tri, r, P, 0, 1),
                            edge_class_of(r.tri, r, Q, 0, 1)};
  return r;
}

}  // namespace esstri::moves
