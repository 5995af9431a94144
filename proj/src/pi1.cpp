#include "esstri/pi1.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace esstri::pi1 {

using tri::Skeleton;
using tri::Triangulation;

Word reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

Word cyclic_reduce(Word w) {
  w = reduce(std::move(w));
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j));
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return reduce(std::move(out));
}

Word power(const Word& w, long k) {
  const Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return reduce(std::move(out));
}

std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w) {
    std::size_t g = gen_of(l);
    if (g < 26)
      s += static_cast<char>((l > 0 ? 'a' : 'A') + static_cast<int>(g));
    else
      s += "{" + std::string(l < 0 ? "-" : "") + std::to_string(g) + "}";
  }
  return s;
}

Word parse_word(const std::string& s) {
  Word w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '1' || c == '*' || c == '.') continue;
    if (c >= 'a' && c <= 'z') {
      w.push_back(letter(static_cast<std::size_t>(c - 'a')));
    } else if (c >= 'A' && c <= 'Z') {
      w.push_back(letter(static_cast<std::size_t>(c - 'A'), true));
    } else if (c == '{') {
      std::size_t close = s.find('}', i);
      if (close == std::string::npos) throw Pi1Error("unterminated generator in word: " + s);
      std::string body = s.substr(i + 1, close - i - 1);
      bool neg = !body.empty() && body[0] == '-';
      w.push_back(letter(std::stoul(neg ? body.substr(1) : body), neg));
      i = close;
    } else {
      throw Pi1Error(std::string("bad character '") + c + "' in word: " + s);
    }
  }
  return reduce(std::move(w));
}

std::string format_presentation(const Presentation& p) {
  std::ostringstream os;
  os << "< ";
  for (std::size_t g = 0; g < p.generators; ++g) os << (g ? ", " : "") << format_word({letter(g)});
  os << " | ";
  for (std::size_t i = 0; i < p.relators.size(); ++i) os << (i ? ", " : "") << format_word(p.relators[i]);
  os << " >";
  return os.str();
}

// ---------------------------------------------------------------- Smith form

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

struct SmithWork {
  IntMatrix a, U, V, Vinv;
  std::size_t m, n;

  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const mpz_class& k) {
    for (std::size_t c = 0; c < n; ++c) a[i][c] += k * a[j][c];
    for (std::size_t c = 0; c < m; ++c) U[i][c] += k * U[j][c];
  }
  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const mpz_class& k) {
    for (std::size_t r = 0; r < m; ++r) a[r][i] += k * a[r][j];
    for (std::size_t r = 0; r < n; ++r) V[r][i] += k * V[r][j];
    for (std::size_t c = 0; c < n; ++c) Vinv[j][c] -= k * Vinv[i][c];
  }
  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(U[i], U[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : V) std::swap(row[i], row[j]);
    std::swap(Vinv[i], Vinv[j]);
  }
  void negate_row(std::size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : U[i]) x = -x;
  }

  bool place_min(std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t r = t; r < m; ++r)
      for (std::size_t c = t; c < n; ++c)
        if (a[r][c] != 0 && (!best || abs(a[r][c]) < abs(a[best->first][best->second]))) best = {r, c};
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }
};

}  // namespace

Smith smith_normal_form(const IntMatrix& mat) {
  SmithWork w;
  w.m = mat.size();
  w.n = w.m ? mat[0].size() : 0;
  w.a = mat;
  w.U = identity(w.m);
  w.V = identity(w.n);
  w.Vinv = identity(w.n);
  Smith s;
  s.rows = w.m;
  s.cols = w.n;
  for (std::size_t t = 0; t < std::min(w.m, w.n); ++t) {
    if (!w.place_min(t)) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t r = t + 1; r < w.m; ++r) {
        if (w.a[r][t] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), w.a[r][t].get_mpz_t(), w.a[t][t].get_mpz_t());
        w.add_row(r, t, -q);
        if (w.a[r][t] != 0) dirty = true;
      }
      for (std::size_t c = t + 1; c < w.n; ++c) {
        if (w.a[t][c] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), w.a[t][c].get_mpz_t(), w.a[t][t].get_mpz_t());
        w.add_col(c, t, -q);
        if (w.a[t][c] != 0) dirty = true;
      }
      if (dirty) {
        // A smaller remainder now sits in row or column t; bring it to the pivot.
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t r = t; r < w.m; ++r)
          if (w.a[r][t] != 0 && (!best || abs(w.a[r][t]) < abs(w.a[best->first][best->second]))) best = {r, t};
        for (std::size_t c = t; c < w.n; ++c)
          if (w.a[t][c] != 0 && (!best || abs(w.a[t][c]) < abs(w.a[best->first][best->second]))) best = {t, c};
        w.swap_rows(t, best->first);
        w.swap_cols(t, best->second);
        continue;
      }
      // Divisibility of the remaining block by the pivot.
      std::optional<std::size_t> bad;
      for (std::size_t r = t + 1; r < w.m && !bad; ++r)
        for (std::size_t c = t + 1; c < w.n; ++c)
          if (w.a[r][c] % w.a[t][t] != 0) {
            bad = r;
            break;
          }
      if (!bad) break;
      w.add_row(t, *bad, 1);
    }
    if (w.a[t][t] < 0) w.negate_row(t);
    s.diag.push_back(w.a[t][t]);
  }
  s.U = std::move(w.U);
  s.V = std::move(w.V);
  s.Vinv = std::move(w.Vinv);
  return s;
}

std::vector<mpz_class> exponent_vector(const Word& w, std::size_t generators) {
  std::vector<mpz_class> v(generators, 0);
  for (int l : w) {
    std::size_t g = gen_of(l);
    if (g >= generators) throw Pi1Error("word letter out of range");
    v[g] += l > 0 ? 1 : -1;
  }
  return v;
}

IntMatrix relator_matrix(const Presentation& p) {
  IntMatrix m;
  for (const Word& r : p.relators) m.push_back(exponent_vector(r, p.generators));
  return m;
}

namespace {

// Smith form of the relator matrix, padded so V is generators x generators
// even without relators.
Smith relator_smith(const Presentation& p) {
  IntMatrix m = relator_matrix(p);
  if (m.empty()) {
    Smith s;
    s.cols = p.generators;
    s.V = identity(p.generators);
    s.Vinv = identity(p.generators);
    return s;
  }
  return smith_normal_form(m);
}

std::vector<mpz_class> row_times(const std::vector<mpz_class>& v, const IntMatrix& m) {
  std::vector<mpz_class> out(m.empty() ? 0 : m[0].size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * m[i][j];
  }
  return out;
}

}  // namespace

std::vector<mpz_class> homology(const Presentation& p) {
  Smith s = relator_smith(p);
  std::vector<mpz_class> inv;
  for (const auto& d : s.diag)
    if (d != 1) inv.push_back(d);
  for (std::size_t i = s.rank(); i < p.generators; ++i) inv.push_back(0);
  return inv;
}

std::string format_invariants(const std::vector<mpz_class>& inv) {
  if (inv.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (i) s += " + ";
    s += inv[i] == 0 ? std::string("Z") : "Z/" + inv[i].get_str();
  }
  return s;
}

std::vector<mpz_class> word_image(const Presentation& p, const Word& w) {
  Smith s = relator_smith(p);
  std::vector<mpz_class> y = row_times(exponent_vector(w, p.generators), s.V);
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < s.rank()) {
      if (s.diag[i] == 1) continue;
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), y[i].get_mpz_t(), s.diag[i].get_mpz_t());
      out.push_back(r);
    } else {
      out.push_back(y[i]);
    }
  }
  return out;
}

bool is_zero(const std::vector<mpz_class>& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

bool in_row_space(const IntMatrix& m, const std::vector<mpz_class>& v) {
  if (m.empty()) return is_zero(v);
  Smith s = smith_normal_form(m);
  std::vector<mpz_class> y = row_times(v, s.V);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < s.rank()) {
      if (y[i] % s.diag[i] != 0) return false;
    } else if (y[i] != 0) {
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ presentations

Presentation presentation_closed(const Triangulation& t) {
  if (!t.is_closed()) throw Pi1Error("edge presentation needs a closed triangulation");
  Skeleton sk = tri::build_skeleton(t);
  if (sk.vertex_count() != 1) throw Pi1Error("edge presentation needs exactly one vertex");
  if (sk.vertices[0].kind != tri::SurfaceKind::sphere) throw Pi1Error("edge presentation needs a sphere vertex link");
  Presentation p;
  p.generators = sk.edges.size();
  for (std::size_t e = 0; e < sk.edges.size(); ++e) p.labels.push_back("edge " + std::to_string(e));
  for (const auto& fc : sk.faces) {
    const auto [tet, f] = fc.reps[0];
    std::array<int, 3> v{};
    for (int x = 0, k = 0; x < 4; ++x)
      if (x != f) v[static_cast<std::size_t>(k++)] = x;
    auto step = [&](int a, int b) {
      const auto& ref = sk.edge_of[tet][static_cast<std::size_t>(tri::edge_index(a, b))];
      const bool forward = (a < b) == (ref.sign > 0);
      return letter(ref.edge, !forward);
    };
    p.relators.push_back({step(v[0], v[1]), step(v[1], v[2]), step(v[2], v[0])});
  }
  return p;
}

int face_crossing(const Skeleton& sk, std::size_t tet, int face) {
  const auto& fo = sk.face_of[tet][static_cast<std::size_t>(face)];
  if (sk.faces[fo[0]].reps.size() != 2) throw Pi1Error("spine crossing through a boundary face");
  return letter(fo[0], fo[1] != 0);
}

SpinePresentation presentation_spine(const Triangulation& t) { return presentation_spine(t, tri::build_skeleton(t)); }

SpinePresentation presentation_spine(const Triangulation& t, const Skeleton& sk) {
  if (!t.is_closed()) throw Pi1Error("spine presentation needs all faces glued");
  SpinePresentation sp;
  std::vector<bool> tree(sk.faces.size(), false), seen(t.size(), false);
  for (std::size_t root = 0; root < t.size(); ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<std::size_t> todo;
    todo.push(root);
    while (!todo.empty()) {
      std::size_t x = todo.front();
      todo.pop();
      for (int f = 0; f < 4; ++f) {
        const auto& g = t.gluing(x, f);
        if (seen[g->tet]) continue;
        seen[g->tet] = true;
        tree[sk.face_of[x][static_cast<std::size_t>(f)][0]] = true;
        todo.push(g->tet);
      }
    }
  }
  sp.generator_of_face.assign(sk.faces.size(), std::nullopt);
  for (std::size_t c = 0; c < sk.faces.size(); ++c) {
    if (tree[c]) continue;
    sp.generator_of_face[c] = sp.face_of_generator.size();
    sp.face_of_generator.push_back(c);
    sp.pres.labels.push_back("face " + std::to_string(c));
  }
  sp.pres.generators = sp.face_of_generator.size();
  for (const auto& e : sk.edges) {
    Word raw, collapsed;
    for (const auto& s : e.steps) {
      int l = face_crossing(sk, s.tet, s.d);
      raw.push_back(l);
      if (auto g = sp.generator_of_face[gen_of(l)]) collapsed.push_back(letter(*g, l < 0));
    }
    sp.face_relators.push_back(raw);
    sp.pres.relators.push_back(reduce(collapsed));
  }
  return sp;
}

std::optional<int> spine_crossing(const SpinePresentation& sp, const Skeleton& sk, std::size_t tet, int face) {
  int l = face_crossing(sk, tet, face);
  auto g = sp.generator_of_face[gen_of(l)];
  if (!g) return std::nullopt;
  return letter(*g, l < 0);
}

// ---------------------------------------------------------------- peripheral

Word path_word(const SpinePresentation& sp, const Skeleton& sk, const std::vector<LinkStep>& path) {
  Word w;
  for (const auto& s : path)
    if (auto l = spine_crossing(sp, sk, s.tet, s.face)) w.push_back(*l);
  return reduce(std::move(w));
}

std::pair<std::size_t, int> path_end(const Triangulation& t, const std::vector<LinkStep>& path) {
  if (path.empty()) throw Pi1Error("path_end of an empty path");
  const auto& s = path.back();
  const auto& g = t.gluing(s.tet, s.face);
  return {g->tet, g->perm[s.vertex]};
}

namespace {

LinkStep reverse_step(const Triangulation& t, const LinkStep& s) {
  const auto& g = t.gluing(s.tet, s.face);
  return LinkStep{g->tet, g->perm[s.vertex], g->perm[s.face]};
}

// Cancels immediate backtracking.
std::vector<LinkStep> reduce_path(const Triangulation& t, const std::vector<LinkStep>& path) {
  std::vector<LinkStep> out;
  for (const auto& s : path) {
    if (!out.empty() && reverse_step(t, out.back()) == s)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<LinkStep> reverse_path(const Triangulation& t, const std::vector<LinkStep>& path) {
  std::vector<LinkStep> out;
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back(reverse_step(t, *it));
  return out;
}

PeripheralSystem peripheral_words(const Triangulation& t, std::size_t vertex) {
  Skeleton sk = tri::build_skeleton(t);
  SpinePresentation sp = presentation_spine(t, sk);
  return peripheral_words(t, sk, sp, vertex);
}

PeripheralSystem peripheral_words(const Triangulation& t, const Skeleton& sk, const SpinePresentation& sp,
                                  std::size_t vertex) {
  if (vertex >= sk.vertices.size()) throw Pi1Error("vertex index out of range");
  const auto& link = sk.vertices[vertex];
  if (link.kind != tri::SurfaceKind::torus) throw Pi1Error("peripheral words need a torus link");
  const auto& tris = link.triangles;
  std::map<std::pair<std::size_t, int>, std::size_t> index;
  for (std::size_t i = 0; i < tris.size(); ++i) index[{tris[i][0], static_cast<int>(tris[i][1])}] = i;
  auto target = [&](const LinkStep& s) {
    const auto& g = t.gluing(s.tet, s.face);
    return index.at({g->tet, g->perm[s.vertex]});
  };

  PeripheralSystem ps;
  ps.vertex = vertex;
  ps.base_tet = tris[0][0];
  ps.base_vertex = static_cast<int>(tris[0][1]);
  ps.tree_paths.assign(tris.size(), {});
  std::vector<bool> seen(tris.size(), false);
  std::map<std::tuple<std::size_t, int, int>, bool> tree_step;
  seen[0] = true;
  std::queue<std::size_t> todo;
  todo.push(0);
  while (!todo.empty()) {
    std::size_t i = todo.front();
    todo.pop();
    const std::size_t tet = tris[i][0];
    const int v = static_cast<int>(tris[i][1]);
    for (int f = 0; f < 4; ++f) {
      if (f == v) continue;
      LinkStep s{tet, v, f};
      std::size_t j = target(s);
      if (seen[j]) continue;
      seen[j] = true;
      ps.tree_paths[j] = ps.tree_paths[i];
      ps.tree_paths[j].push_back(s);
      LinkStep r = reverse_step(t, s);
      tree_step[{s.tet, s.vertex, s.face}] = true;
      tree_step[{r.tet, r.vertex, r.face}] = true;
      todo.push(j);
    }
  }

  // Cotree dual edges, each in its lexicographically smaller direction.
  std::vector<LinkStep> cotree;
  std::map<std::tuple<std::size_t, int, int>, std::pair<std::size_t, int>> coord;
  for (const auto& tr : tris) {
    const int v = static_cast<int>(tr[1]);
    for (int f = 0; f < 4; ++f) {
      if (f == v) continue;
      LinkStep s{tr[0], v, f};
      LinkStep r = reverse_step(t, s);
      auto ks = std::make_tuple(s.tet, s.vertex, s.face), kr = std::make_tuple(r.tet, r.vertex, r.face);
      if (tree_step.count(ks) || !(ks < kr)) continue;
      coord[ks] = {cotree.size(), 1};
      coord[kr] = {cotree.size(), -1};
      cotree.push_back(s);
    }
  }
  const std::size_t k = cotree.size();

  // Relations: the dual cycle around each link vertex (an edge end).
  IntMatrix rel;
  for (const auto& e : sk.edges) {
    for (int end = 0; end < 2; ++end) {
      const auto& s0 = e.steps[0];
      if (sk.vertex_of[s0.tet][static_cast<std::size_t>(end ? s0.b : s0.a)] != vertex) continue;
      std::vector<mpz_class> row(k, 0);
      for (const auto& s : e.steps) {
        auto it = coord.find({s.tet, end ? s.b : s.a, s.d});
        if (it != coord.end()) row[it->second.first] += it->second.second;
      }
      rel.push_back(row);
    }
  }
  Smith sm = rel.empty() ? Smith{} : smith_normal_form(rel);
  if (rel.empty()) sm.Vinv = identity(k);
  if (sm.rank() + 2 != k || std::any_of(sm.diag.begin(), sm.diag.end(), [](const mpz_class& d) { return d != 1; }))
    throw Pi1Error("link homology is not Z^2");

  for (std::size_t gi = sm.rank(); gi < k; ++gi) {
    std::vector<LinkStep> path;
    for (std::size_t j = 0; j < k; ++j) {
      const mpz_class& x = sm.Vinv[gi][j];
      if (x == 0) continue;
      const LinkStep& s = cotree[j];
      std::vector<LinkStep> cyc = ps.tree_paths[index.at({s.tet, s.vertex})];
      cyc.push_back(s);
      auto back = reverse_path(t, ps.tree_paths[target(s)]);
      cyc.insert(cyc.end(), back.begin(), back.end());
      if (x < 0) cyc = reverse_path(t, cyc);
      for (long n = mpz_class(abs(x)).get_si(); n > 0; --n) path.insert(path.end(), cyc.begin(), cyc.end());
    }
    path = reduce_path(t, path);
    ps.curves.push_back(PeripheralCurve{path, path_word(sp, sk, path)});
  }
  return ps;
}

// ---------------------------------------------------------------- simplify

namespace {

Word canonical_relator(Word r) {
  r = cyclic_reduce(std::move(r));
  if (r.empty()) return r;
  Word best;
  for (const Word& base : {r, inverse(r)}) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      Word c(base.begin() + static_cast<long>(i), base.end());
      c.insert(c.end(), base.begin(), base.begin() + static_cast<long>(i));
      if (best.empty() || c < best) best = c;
    }
  }
  return best;
}

void normalize(Presentation& p) {
  std::vector<Word> rels;
  for (const Word& r : p.relators) {
    Word c = canonical_relator(r);
    if (!c.empty()) rels.push_back(c);
  }
  std::sort(rels.begin(), rels.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
  p.relators = std::move(rels);
}

Word substitute(const Word& w, std::size_t g, const Word& value) {
  Word out;
  const Word inv = inverse(value);
  for (int l : w) {
    if (gen_of(l) == g) {
      const Word& v = l > 0 ? value : inv;
      out.insert(out.end(), v.begin(), v.end());
    } else {
      out.push_back(l);
    }
  }
  return reduce(std::move(out));
}

Word drop_generator(const Word& w, std::size_t g) {
  Word out;
  for (int l : w) {
    std::size_t h = gen_of(l);
    out.push_back(h > g ? letter(h - 1, l < 0) : l);
  }
  return out;
}

std::size_t total_length(const std::vector<Word>& rels) {
  std::size_t n = 0;
  for (const auto& r : rels) n += r.size();
  return n;
}

}  // namespace

Simplified simplify_presentation(const Presentation& input, const SimplifyOptions& opt) {
  Simplified s;
  s.pres = input;
  s.pres.labels.clear();
  for (std::size_t g = 0; g < input.generators; ++g) s.image.push_back({letter(g)});
  for (;;) {
    normalize(s.pres);
    const std::size_t old_total = total_length(s.pres.relators);
    struct Candidate {
      std::size_t total, rel_len, g, r;
      Word value;
    };
    std::optional<Candidate> best;
    for (std::size_t ri = 0; ri < s.pres.relators.size(); ++ri) {
      const Word& r = s.pres.relators[ri];
      for (std::size_t pos = 0; pos < r.size(); ++pos) {
        const std::size_t g = gen_of(r[pos]);
        if (std::count_if(r.begin(), r.end(), [&](int l) { return gen_of(l) == g; }) != 1) continue;
        // r = u g^e v = 1  =>  g^e = u^-1 v^-1.
        Word u(r.begin(), r.begin() + static_cast<long>(pos)), v(r.begin() + static_cast<long>(pos) + 1, r.end());
        Word value = reduce(concat(inverse(u), inverse(v)));
        if (r[pos] < 0) value = inverse(value);
        std::size_t total = 0;
        for (std::size_t rj = 0; rj < s.pres.relators.size(); ++rj)
          if (rj != ri) total += cyclic_reduce(substitute(s.pres.relators[rj], g, value)).size();
        const bool cheap = r.size() <= 2;
        const bool allowed = total <= opt.max_total_length &&
                             (cheap || static_cast<double>(total) <= opt.growth * static_cast<double>(old_total));
        if (!allowed) continue;
        Candidate c{total, r.size(), g, ri, value};
        auto key = [](const Candidate& x) { return std::make_tuple(x.rel_len > 2, x.total, x.rel_len, x.g, x.r); };
        if (!best || key(c) < key(*best)) best = c;
      }
    }
    if (!best) break;
    std::vector<Word> rels;
    for (std::size_t rj = 0; rj < s.pres.relators.size(); ++rj)
      if (rj != best->r) rels.push_back(drop_generator(substitute(s.pres.relators[rj], best->g, best->value), best->g));
    s.pres.relators = std::move(rels);
    for (Word& im : s.image) im = drop_generator(substitute(im, best->g, best->value), best->g);
    --s.pres.generators;
  }
  return s;
}

Word map_word(const Simplified& s, const Word& w) {
  Word out;
  for (int l : w) {
    const Word& im = s.image.at(gen_of(l));
    if (l > 0)
      out.insert(out.end(), im.begin(), im.end());
    else {
      Word inv = inverse(im);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return reduce(std::move(out));
}

}  // namespace esstri::pi1
