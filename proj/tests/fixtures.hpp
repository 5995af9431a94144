#pragma once

#include <random>
#include <string>
#include <vector>

#include "esstri/io.hpp"
#include "esstri/skeleton.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(ESSTRI_DATA_DIR) + "/" + name; }

inline esstri::tri::Triangulation load(const std::string& name) {
  return esstri::tri::read_triangulation_file(path(name));
}

inline esstri::tri::Triangulation m136() { return load("m136.tri"); }
inline esstri::tri::Triangulation fig8() { return load("fig8.tri"); }
inline esstri::tri::Triangulation quaternionic() { return load("quaternionic.tri"); }

/// Edge cycles of m136 as tabulated alongside its gluing data.
inline std::vector<std::vector<esstri::tri::Corner>> m136_edge_table() {
  using C = esstri::tri::Corner;
  return {
      {C{0, 0, 1}, C{4, 3, 0}, C{2, 2, 1}, C{1, 3, 1}},
      {C{0, 0, 2}, C{1, 3, 2}, C{2, 3, 0}, C{6, 1, 3}},
      {C{0, 0, 3}, C{6, 1, 0}, C{5, 1, 0}, C{3, 3, 0}, C{6, 0, 2}, C{5, 0, 3}, C{3, 1, 3}, C{6, 3, 0}, C{0, 2, 3},
       C{4, 3, 2}},
      {C{0, 1, 2}, C{4, 1, 3}, C{2, 3, 2}, C{1, 3, 0}, C{2, 2, 0}, C{1, 0, 2}, C{3, 1, 2}, C{5, 0, 2}, C{3, 0, 2},
       C{1, 1, 2}},
      {C{0, 1, 3}, C{4, 0, 2}, C{5, 3, 2}, C{3, 3, 2}, C{5, 1, 2}, C{4, 1, 2}},
      {C{1, 0, 1}, C{2, 0, 1}, C{6, 3, 2}, C{3, 1, 0}},
      {C{2, 1, 3}, C{6, 2, 1}, C{5, 3, 1}, C{4, 0, 1}},
  };
}

/// Random closed triangulation: a random perfect matching of the 4n faces
/// with random gluing permutations.  When oriented is set every gluing is odd.
inline esstri::tri::Triangulation random_closed(std::mt19937& rng, std::size_t n, bool oriented) {
  using esstri::tri::Perm4;
  std::vector<std::pair<std::size_t, int>> faces;
  for (std::size_t t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) faces.emplace_back(t, f);
  std::shuffle(faces.begin(), faces.end(), rng);
  esstri::tri::Triangulation tri(n);
  for (std::size_t i = 0; i + 1 < faces.size(); i += 2) {
    auto [t1, f1] = faces[i];
    auto [t2, f2] = faces[i + 1];
    std::vector<Perm4> options;
    for (const Perm4& p : Perm4::all())
      if (p[f1] == f2 && (!oriented || p.sign() == -1)) options.push_back(p);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    tri.glue(t1, f1, t2, options[pick(rng)]);
  }
  return tri;
}

}  // namespace fixtures
