// Enumerates closed oriented two-tetrahedron triangulations with one vertex
// and prints one representative per isomorphism class with its homology.
#include <iostream>
#include <vector>

#include "esstri/io.hpp"
#include "esstri/pi1.hpp"
#include "esstri/skeleton.hpp"

using namespace esstri;
using tri::Perm4;
using tri::Triangulation;

namespace {

std::vector<Triangulation> found;

void extend(Triangulation& t) {
  std::optional<std::pair<std::size_t, int>> open;
  for (std::size_t x = 0; x < t.size() && !open; ++x)
    for (int f = 0; f < 4; ++f)
      if (!t.gluing(x, f)) {
        open = {x, f};
        break;
      }
  if (!open) {
    tri::Skeleton sk = tri::build_skeleton(t);
    if (sk.vertex_count() != 1 || !sk.all_edges_valid()) return;
    for (const auto& prev : found)
      if (tri::are_isomorphic(prev, t)) return;
    found.push_back(t);
    return;
  }
  auto [x, f] = *open;
  for (std::size_t y = x; y < t.size(); ++y)
    for (int g = 0; g < 4; ++g) {
      if ((y == x && g <= f) || t.gluing(y, g)) continue;
      for (const Perm4& p : Perm4::all()) {
        if (p[f] != g || p.sign() != -1) continue;
        t.glue(x, f, y, p);
        extend(t);
        t.unglue(x, f);
      }
    }
}

}  // namespace

int main() {
  Triangulation t(2);
  extend(t);
  for (const auto& c : found) {
    tri::Skeleton sk = tri::build_skeleton(c);
    auto h = pi1::homology(pi1::presentation_spine(c, sk).pres);
    std::cout << "# link " << tri::to_string(sk.vertices[0].kind) << ", edges " << sk.edges.size() << ", degrees";
    for (const auto& e : sk.edges) std::cout << ' ' << e.degree();
    std::cout << ", H1 = " << pi1::format_invariants(h) << '\n' << tri::to_table(c) << '\n';
  }
}
