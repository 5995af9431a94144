#include "esstri/skeleton.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace esstri::tri {

int edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  if (a < 0 || b > 3 || a == b) throw TriangulationError("edge_index: bad vertex pair");
  return table[a][b];
}

std::array<int, 2> edge_vertices(int e) {
  static constexpr std::array<std::array<int, 2>, 6> pairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return pairs.at(static_cast<std::size_t>(e));
}

int slot_of(int a, int b) {
  static constexpr int slots[6] = {0, 1, 2, 2, 1, 0};
  return slots[edge_index(a, b)];
}

long VertexLink::genus() const {
  if (has_boundary) return -1;
  return orientable ? (2 - euler_characteristic) / 2 : 2 - euler_characteristic;
}

long Skeleton::euler_characteristic() const {
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(faces.size()) - static_cast<long>(tet_count);
}

bool Skeleton::all_edges_valid() const {
  return std::all_of(edges.begin(), edges.end(), [](const EdgeClass& e) { return e.valid; });
}

namespace {

std::array<int, 2> others(int a, int b) {
  std::array<int, 2> out{};
  std::size_t k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != a && v != b) out[k++] = v;
  return out;
}

bool same_corner(const EdgeStep& s, std::size_t tet, int a, int b) {
  return s.tet == tet && ((s.a == a && s.b == b) || (s.a == b && s.b == a));
}

// Walks forward (leaving through the face opposite d) until the start
// corner recurs or a boundary face is hit.
void walk(const Triangulation& t, EdgeStep start, TraceResult& out) {
  EdgeStep s = start;
  const std::size_t limit = 6 * t.size() + 1;
  while (true) {
    out.steps.push_back(s);
    const auto& g = t.gluing(s.tet, s.d);
    if (!g) {
      out.hit_boundary = true;
      return;
    }
    const Perm4& p = g->perm;
    EdgeStep next{g->tet, p[s.a], p[s.b], p[s.d], p[s.c]};
    if (same_corner(next, start.tet, start.a, start.b)) {
      out.returned_identity = next == start;
      return;
    }
    if (out.steps.size() > limit) throw TriangulationError("edge tracing did not close; gluings inconsistent");
    s = next;
  }
}

struct Variant {
  std::vector<EdgeStep> steps;
  std::vector<Corner> corners;
};

std::vector<Corner> corners_of(const std::vector<EdgeStep>& steps) {
  std::vector<Corner> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(Corner{s.tet, s.a, s.b});
  return out;
}

// Least variant under direction reversal, orientation flip and (for cyclic
// sequences) rotation.  The first corner is required to be ascending.
std::vector<EdgeStep> canonical_steps(const std::vector<EdgeStep>& steps, bool cyclic) {
  std::optional<Variant> best;
  const std::size_t n = steps.size();
  for (int flip = 0; flip < 2; ++flip) {
    for (int rev = 0; rev < 2; ++rev) {
      std::vector<EdgeStep> base;
      base.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        EdgeStep s = rev ? steps[n - 1 - i] : steps[i];
        if (rev) std::swap(s.c, s.d);
        if (flip) std::swap(s.a, s.b);
        base.push_back(s);
      }
      const std::size_t rotations = cyclic ? n : 1;
      for (std::size_t r = 0; r < rotations; ++r) {
        std::vector<EdgeStep> cand(base.begin() + static_cast<long>(r), base.end());
        cand.insert(cand.end(), base.begin(), base.begin() + static_cast<long>(r));
        if (cand.front().a > cand.front().b) continue;
        auto corners = corners_of(cand);
        if (!best || corners < best->corners) best = Variant{std::move(cand), std::move(corners)};
      }
    }
  }
  return best ? best->steps : steps;
}

}  // namespace

TraceResult trace_edge(const Triangulation& t, std::size_t tet, int a, int b) {
  auto [c, d] = others(a, b);
  TraceResult fwd;
  walk(t, EdgeStep{tet, a, b, c, d}, fwd);
  if (!fwd.hit_boundary) return fwd;
  TraceResult back;
  walk(t, EdgeStep{tet, a, b, d, c}, back);
  TraceResult out;
  out.hit_boundary = true;
  for (std::size_t i = back.steps.size(); i-- > 1;) {
    EdgeStep s = back.steps[i];
    std::swap(s.c, s.d);
    out.steps.push_back(s);
  }
  out.steps.insert(out.steps.end(), fwd.steps.begin(), fwd.steps.end());
  return out;
}

std::vector<Corner> canonical_cycle(std::vector<Corner> cycle) {
  std::vector<EdgeStep> steps;
  for (const auto& c : cycle) steps.push_back(EdgeStep{c.tet, c.a, c.b, 0, 0});
  return corners_of(canonical_steps(steps, true));
}

bool same_cycle(const std::vector<Corner>& x, const std::vector<Corner>& y) {
  return x.size() == y.size() && canonical_cycle(x) == canonical_cycle(y);
}

Skeleton build_skeleton(const Triangulation& t) {
  {
    auto report = validate(t, GlueMode::boundary);
    if (!report.ok()) throw TriangulationError("build_skeleton: " + report.violations.front().message);
  }
  const std::size_t n = t.size();
  Skeleton sk;
  sk.tet_count = n;
  sk.edge_of.assign(n, {});
  sk.face_of.assign(n, {});
  sk.vertex_of.assign(n, {});

  // Edge classes.
  std::vector<std::array<bool, 6>> seen(n, std::array<bool, 6>{});
  for (std::size_t tet = 0; tet < n; ++tet) {
    for (int e = 0; e < 6; ++e) {
      if (seen[tet][static_cast<std::size_t>(e)]) continue;
      auto [a, b] = edge_vertices(e);
      TraceResult tr = trace_edge(t, tet, a, b);
      EdgeClass cls;
      cls.index = sk.edges.size();
      cls.boundary = tr.hit_boundary;
      cls.valid = tr.hit_boundary || tr.returned_identity;
      // Distinct corners only; an invalid edge can revisit a corner reversed.
      std::vector<EdgeStep> steps;
      for (const auto& s : tr.steps) {
        int k = edge_index(s.a, s.b);
        if (seen[s.tet][static_cast<std::size_t>(k)]) continue;
        seen[s.tet][static_cast<std::size_t>(k)] = true;
        steps.push_back(s);
      }
      cls.steps = canonical_steps(steps, !cls.boundary);
      cls.corners = corners_of(cls.steps);
      for (const auto& s : cls.steps) {
        int k = edge_index(s.a, s.b);
        sk.edge_of[s.tet][static_cast<std::size_t>(k)] = EdgeRef{cls.index, s.a < s.b ? 1 : -1};
      }
      sk.edges.push_back(std::move(cls));
    }
  }

  // Face classes.
  std::vector<std::array<bool, 4>> face_seen(n, std::array<bool, 4>{});
  for (std::size_t tet = 0; tet < n; ++tet) {
    for (int f = 0; f < 4; ++f) {
      if (face_seen[tet][static_cast<std::size_t>(f)]) continue;
      FaceClass fc;
      fc.index = sk.faces.size();
      fc.reps.push_back(FaceRef{tet, f});
      face_seen[tet][static_cast<std::size_t>(f)] = true;
      sk.face_of[tet][static_cast<std::size_t>(f)] = {fc.index, 0};
      if (const auto& g = t.gluing(tet, f)) {
        int f2 = g->perm[f];
        fc.reps.push_back(FaceRef{g->tet, f2});
        face_seen[g->tet][static_cast<std::size_t>(f2)] = true;
        sk.face_of[g->tet][static_cast<std::size_t>(f2)] = {fc.index, 1};
      }
      sk.faces.push_back(std::move(fc));
    }
  }

  // Vertex classes by union-find over (tet, vertex).
  std::vector<std::size_t> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t tet = 0; tet < n; ++tet)
    for (int f = 0; f < 4; ++f)
      if (const auto& g = t.gluing(tet, f))
        for (int v = 0; v < 4; ++v) {
          if (v == f) continue;
          std::size_t x = find(4 * tet + static_cast<std::size_t>(v));
          std::size_t y = find(4 * g->tet + static_cast<std::size_t>(g->perm[v]));
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
  std::map<std::size_t, std::size_t> root_to_class;
  for (std::size_t tet = 0; tet < n; ++tet)
    for (int v = 0; v < 4; ++v) {
      std::size_t r = find(4 * tet + static_cast<std::size_t>(v));
      auto [it, inserted] = root_to_class.try_emplace(r, sk.vertices.size());
      if (inserted) {
        VertexLink link;
        link.index = it->second;
        sk.vertices.push_back(link);
      }
      sk.vertex_of[tet][static_cast<std::size_t>(v)] = it->second;
      auto& link = sk.vertices[it->second];
      link.triangles.push_back({tet, static_cast<std::size_t>(v)});
      ++link.triangle_count;
    }

  for (const auto& e : sk.edges) {
    const auto& c = e.corners.front();
    ++sk.vertices[sk.vertex_of[c.tet][static_cast<std::size_t>(c.a)]].link_vertex_count;
    if (e.valid) ++sk.vertices[sk.vertex_of[c.tet][static_cast<std::size_t>(c.b)]].link_vertex_count;
  }
  for (const auto& fc : sk.faces) {
    const auto& r = fc.reps.front();
    for (int v = 0; v < 4; ++v)
      if (v != r.face) ++sk.vertices[sk.vertex_of[r.tet][static_cast<std::size_t>(v)]].link_edge_count;
  }

  // Link orientability: triangle signs s with s(t,v) s(t',p v) sign(p) = -1.
  std::vector<int> tri_sign(4 * n, 0);
  for (auto& link : sk.vertices) {
    link.euler_characteristic = static_cast<long>(link.link_vertex_count) -
                                static_cast<long>(link.link_edge_count) + static_cast<long>(link.triangle_count);
    const auto& first = link.triangles.front();
    std::queue<std::array<std::size_t, 2>> todo;
    tri_sign[4 * first[0] + first[1]] = 1;
    todo.push(first);
    while (!todo.empty()) {
      auto [tet, v] = todo.front();
      todo.pop();
      int s = tri_sign[4 * tet + v];
      for (int f = 0; f < 4; ++f) {
        if (static_cast<std::size_t>(f) == v) continue;
        const auto& g = t.gluing(tet, f);
        if (!g) {
          link.has_boundary = true;
          continue;
        }
        std::size_t w = static_cast<std::size_t>(g->perm[static_cast<int>(v)]);
        int want = -s * g->perm.sign();
        int& other = tri_sign[4 * g->tet + w];
        if (other == 0) {
          other = want;
          todo.push({g->tet, w});
        } else if (other != want) {
          link.orientable = false;
        }
      }
    }
    if (link.has_boundary)
      link.kind = SurfaceKind::other;
    else if (link.orientable && link.euler_characteristic == 2)
      link.kind = SurfaceKind::sphere;
    else if (link.orientable && link.euler_characteristic == 0)
      link.kind = SurfaceKind::torus;
    else if (!link.orientable && link.euler_characteristic == 0)
      link.kind = SurfaceKind::klein_bottle;
    else
      link.kind = SurfaceKind::other;
  }

  const bool closed = t.is_closed();
  if (closed && n > 0 && sk.vertices.size() == 1 && sk.vertices.front().kind == SurfaceKind::sphere &&
      sk.all_edges_valid()) {
    sk.classification = Classification::closed_manifold_1vertex;
  } else if (closed && n > 0 && sk.all_edges_valid() &&
             std::all_of(sk.vertices.begin(), sk.vertices.end(), [](const VertexLink& l) {
               return l.kind == SurfaceKind::torus || l.kind == SurfaceKind::klein_bottle;
             })) {
    sk.classification = Classification::ideal_all_torus_or_klein;
  } else {
    sk.classification = Classification::pseudo_manifold_other;
  }
  return sk;
}

std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::torus: return "torus";
    case SurfaceKind::klein_bottle: return "klein_bottle";
    case SurfaceKind::other: return "other";
  }
  return "other";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::closed_manifold_1vertex: return "closed_manifold_1vertex";
    case Classification::ideal_all_torus_or_klein: return "ideal_all_torus_or_klein";
    case Classification::pseudo_manifold_other: return "pseudo_manifold_other";
  }
  return "pseudo_manifold_other";
}

}  // namespace esstri::tri
