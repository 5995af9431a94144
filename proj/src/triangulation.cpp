#include "esstri/triangulation.hpp"

#include <functional>
#include <queue>
#include <sstream>

namespace esstri::tri {

void Triangulation::glue(std::size_t tet, int face, std::size_t tet2, Perm4 perm) {
  if (tet >= size() || tet2 >= size()) throw TriangulationError("glue: tetrahedron index out of range");
  if (face < 0 || face > 3) throw TriangulationError("glue: face index out of range");
  if (tet == tet2 && perm[face] == face)
    throw TriangulationError("glue: face cannot be glued to itself");
  unglue(tet, face);
  unglue(tet2, perm[face]);
  set_one_side(tet, face, Gluing{tet2, perm});
  set_one_side(tet2, perm[face], Gluing{tet, perm.inverse()});
}

void Triangulation::unglue(std::size_t tet, int face) {
  auto g = gluing(tet, face);
  if (!g) return;
  set_one_side(tet, face, std::nullopt);
  if (g->tet < size()) {
    auto& back = faces_[g->tet][static_cast<std::size_t>(g->perm[face])];
    if (back && back->tet == tet) back.reset();
  }
}

std::size_t Triangulation::add_tets(std::size_t k) {
  std::size_t first = faces_.size();
  faces_.resize(faces_.size() + k);
  return first;
}

void Triangulation::relabel_tet(std::size_t tet, Perm4 p) {
  const Perm4 pinv = p.inverse();
  std::array<std::optional<Gluing>, 4> old = faces_.at(tet);
  std::array<std::optional<Gluing>, 4> fresh{};
  for (int f = 0; f < 4; ++f) {
    const auto& g = old[static_cast<std::size_t>(f)];
    if (!g) continue;
    if (g->tet == tet) {
      fresh[static_cast<std::size_t>(p[f])] = Gluing{tet, p * g->perm * pinv};
    } else {
      fresh[static_cast<std::size_t>(p[f])] = Gluing{g->tet, g->perm * pinv};
      faces_[g->tet][static_cast<std::size_t>(g->perm[f])] = Gluing{tet, p * g->perm.inverse()};
    }
  }
  faces_[tet] = fresh;
}

bool Triangulation::is_closed() const { return boundary_face_count() == 0; }

std::size_t Triangulation::boundary_face_count() const {
  std::size_t n = 0;
  for (const auto& tet : faces_)
    for (const auto& g : tet)
      if (!g) ++n;
  return n;
}

ValidationReport validate(const Triangulation& t, GlueMode mode) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::size_t tet, int face, const std::string& msg) {
    std::ostringstream os;
    os << msg << " at (" << tet << "," << face << ")";
    report.violations.push_back(Violation{kind, FaceRef{tet, face}, os.str()});
  };
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(tet, f);
      if (!g) {
        if (mode == GlueMode::closed) add(ViolationKind::unglued_face, tet, f, "unglued face");
        continue;
      }
      if (g->tet >= t.size()) {
        add(ViolationKind::target_out_of_range, tet, f, "gluing target out of range");
        continue;
      }
      if (g->tet == tet && g->perm[f] == f) {
        add(ViolationKind::self_identified_face, tet, f, "face identified with itself");
        continue;
      }
      const auto& back = t.gluing(g->tet, g->perm[f]);
      if (!back || back->tet != tet || back->perm != g->perm.inverse())
        add(ViolationKind::mutual_inverse, tet, f, "mutual inverse violated");
    }
  }
  return report;
}

void require_valid(const Triangulation& t, GlueMode mode) {
  auto report = validate(t, mode);
  if (!report.ok()) throw TriangulationError("invalid triangulation: " + report.violations.front().message);
}

namespace {

struct IsoSearch {
  const Triangulation& a;
  const Triangulation& b;
  std::vector<std::optional<std::size_t>> image;
  std::vector<Perm4> perm;
  std::vector<bool> used;

  // Maps root -> (target, p) and propagates through gluings.  On failure the
  // assignments made here are undone.
  bool propagate(std::size_t root, std::size_t target, Perm4 p) {
    std::vector<std::size_t> assigned;
    auto undo = [&] {
      for (std::size_t x : assigned) {
        used[*image[x]] = false;
        image[x].reset();
      }
      return false;
    };
    auto assign = [&](std::size_t x, std::size_t y, Perm4 q) {
      image[x] = y;
      perm[x] = q;
      used[y] = true;
      assigned.push_back(x);
    };
    if (used[target]) return false;
    assign(root, target, p);
    std::queue<std::size_t> todo;
    todo.push(root);
    while (!todo.empty()) {
      std::size_t x = todo.front();
      todo.pop();
      for (int f = 0; f < 4; ++f) {
        const auto& ga = a.gluing(x, f);
        const auto& gb = b.gluing(*image[x], perm[x][f]);
        if (!ga || !gb) {
          if (ga.has_value() != gb.has_value()) return undo();
          continue;
        }
        // b's gluing must equal perm[y] * ga.perm * perm[x]^-1.
        Perm4 want = gb->perm * perm[x] * ga->perm.inverse();
        std::size_t y = ga->tet;
        if (image[y]) {
          if (*image[y] != gb->tet || perm[y] != want) return undo();
        } else {
          if (used[gb->tet]) return undo();
          assign(y, gb->tet, want);
          todo.push(y);
        }
      }
    }
    return true;
  }

  bool search() {
    std::size_t root = 0;
    while (root < a.size() && image[root]) ++root;
    if (root == a.size()) return true;
    for (std::size_t target = 0; target < b.size(); ++target) {
      if (used[target]) continue;
      for (const Perm4& p : Perm4::all()) {
        std::vector<std::optional<std::size_t>> saved_image = image;
        std::vector<bool> saved_used = used;
        if (propagate(root, target, p) && search()) return true;
        image = std::move(saved_image);
        used = std::move(saved_used);
      }
    }
    return false;
  }
};

}  // namespace

std::optional<Isomorphism> are_isomorphic(const Triangulation& a, const Triangulation& b) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.boundary_face_count() != b.boundary_face_count()) return std::nullopt;
  IsoSearch s{a, b, std::vector<std::optional<std::size_t>>(a.size()), std::vector<Perm4>(a.size()),
              std::vector<bool>(b.size(), false)};
  if (!s.search()) return std::nullopt;
  Isomorphism iso;
  for (std::size_t x = 0; x < a.size(); ++x) {
    iso.tet_map.push_back(*s.image[x]);
    iso.vertex_maps.push_back(s.perm[x]);
  }
  return iso;
}

bool is_isomorphism(const Triangulation& a, const Triangulation& b, const Isomorphism& iso) {
  if (a.size() != b.size() || iso.tet_map.size() != a.size() || iso.vertex_maps.size() != a.size())
    return false;
  std::vector<bool> hit(b.size(), false);
  for (std::size_t x : iso.tet_map) {
    if (x >= b.size() || hit[x]) return false;
    hit[x] = true;
  }
  for (std::size_t x = 0; x < a.size(); ++x) {
    const Perm4 px = iso.vertex_maps[x];
    for (int f = 0; f < 4; ++f) {
      const auto& ga = a.gluing(x, f);
      const auto& gb = b.gluing(iso.tet_map[x], px[f]);
      if (ga.has_value() != gb.has_value()) return false;
      if (!ga) continue;
      if (gb->tet != iso.tet_map[ga->tet]) return false;
      if (gb->perm != iso.vertex_maps[ga->tet] * ga->perm * px.inverse()) return false;
    }
  }
  return true;
}

Triangulation apply_isomorphism(const Triangulation& t, const Isomorphism& iso) {
  Triangulation out(t.size());
  for (std::size_t x = 0; x < t.size(); ++x) {
    const Perm4 px = iso.vertex_maps.at(x);
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(x, f);
      if (!g) continue;
      out.set_one_side(iso.tet_map[x], px[f],
                       Gluing{iso.tet_map.at(g->tet), iso.vertex_maps.at(g->tet) * g->perm * px.inverse()});
    }
  }
  out.set_label(t.label());
  return out;
}

std::optional<std::vector<int>> orientation_signs(const Triangulation& t) {
  std::vector<int> sign(t.size(), 0);
  for (std::size_t root = 0; root < t.size(); ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::queue<std::size_t> todo;
    todo.push(root);
    while (!todo.empty()) {
      std::size_t x = todo.front();
      todo.pop();
      for (int f = 0; f < 4; ++f) {
        const auto& g = t.gluing(x, f);
        if (!g) continue;
        int want = -sign[x] * g->perm.sign();
        if (sign[g->tet] == 0) {
          sign[g->tet] = want;
          todo.push(g->tet);
        } else if (sign[g->tet] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return sign;
}

bool is_oriented(const Triangulation& t) {
  for (std::size_t x = 0; x < t.size(); ++x)
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(x, f);
      if (g && g->perm.sign() != -1) return false;
    }
  return true;
}

std::optional<Triangulation> oriented_copy(const Triangulation& t) {
  auto signs = orientation_signs(t);
  if (!signs) return std::nullopt;
  Triangulation out = t;
  for (std::size_t x = 0; x < t.size(); ++x)
    if ((*signs)[x] < 0) out.relabel_tet(x, Perm4::swap(2, 3));
  return out;
}

}  // namespace esstri::tri
