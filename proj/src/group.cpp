#include "esstri/group.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace esstri::pi1 {

namespace {

int col(int l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }

std::vector<int> cols_of(const Word& w) {
  std::vector<int> c;
  c.reserve(w.size());
  for (int l : w) c.push_back(col(l));
  return c;
}

std::vector<std::vector<int>> relator_cols(const Presentation& p) {
  std::vector<std::vector<int>> out;
  for (const Word& r : p.relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty()) out.push_back(cols_of(c));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- budget

Budget parse_budget(const std::string& spec, Budget b) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("budget entry without '=': " + item);
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t v = 0;
    try {
      v = std::stoul(val);
    } catch (const std::exception&) {
      throw std::invalid_argument("budget value is not a number: " + item);
    }
    if (key == "coset_nodes") b.coset_nodes = v;
    else if (key == "quotient_degree") b.quotient_degree = v;
    else if (key == "quotient_nodes") b.quotient_nodes = v;
    else if (key == "rewrite_steps") b.rewrite_steps = v;
    else if (key == "literal_depth") b.literal_depth = v;
    else throw std::invalid_argument("unknown budget key: " + key);
  }
  return b;
}

std::string format_budget(const Budget& b) {
  std::ostringstream os;
  os << "coset_nodes=" << b.coset_nodes << ",quotient_degree=" << b.quotient_degree
     << ",quotient_nodes=" << b.quotient_nodes << ",rewrite_steps=" << b.rewrite_steps
     << ",literal_depth=" << b.literal_depth;
  return os.str();
}

// ---------------------------------------------------------------- rewriting

namespace {

std::optional<Word> variant(const Presentation& p, std::size_t relator, bool inverted, std::size_t offset) {
  if (relator >= p.relators.size()) return std::nullopt;
  Word r = cyclic_reduce(p.relators[relator]);
  if (inverted) r = inverse(r);
  if (offset >= r.size()) return std::nullopt;
  std::rotate(r.begin(), r.begin() + static_cast<long>(offset), r.end());
  return r;
}

Word rotated(const Word& w, std::size_t k) {
  Word out = w;
  std::rotate(out.begin(), out.begin() + static_cast<long>(k), out.end());
  return out;
}

}  // namespace

std::optional<Word> apply_step(const Presentation& p, const Word& w, const RewriteStep& s) {
  if (w.empty() || s.rotate >= w.size()) return std::nullopt;
  auto v = variant(p, s.relator, s.inverted, s.offset);
  if (!v || s.length > w.size() || s.length > v->size()) return std::nullopt;
  Word r = rotated(w, s.rotate);
  if (!std::equal(v->begin(), v->begin() + static_cast<long>(s.length), r.begin())) return std::nullopt;
  Word out = inverse(Word(v->begin() + static_cast<long>(s.length), v->end()));
  out.insert(out.end(), r.begin() + static_cast<long>(s.length), r.end());
  return cyclic_reduce(std::move(out));
}

namespace {

struct Variant {
  std::size_t relator;
  bool inverted;
  std::size_t offset;
  Word word;
};

std::vector<Variant> all_variants(const Presentation& p) {
  std::vector<Variant> out;
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (bool inv : {false, true}) {
      const std::size_t len = cyclic_reduce(p.relators[i]).size();
      for (std::size_t o = 0; o < len; ++o) out.push_back({i, inv, o, *variant(p, i, inv, o)});
    }
  return out;
}

std::size_t common_prefix(const Word& cur, std::size_t rot, const Word& v) {
  std::size_t k = 0;
  while (k < v.size() && k < cur.size() && cur[(rot + k) % cur.size()] == v[k]) ++k;
  return k;
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) best = std::min(best, rotated(w, k));
  return best;
}

}  // namespace

std::optional<RewriteTrace> rewrite_to_identity(const Presentation& p, const Word& w, std::size_t max_steps) {
  RewriteTrace trace;
  trace.start = cyclic_reduce(w);
  const auto variants = all_variants(p);

  // Greedy Dehn pass: always take the largest shortening.
  Word cur = trace.start;
  while (!cur.empty()) {
    std::optional<RewriteStep> best;
    long gain = 0;
    for (std::size_t rot = 0; rot < cur.size(); ++rot)
      for (const auto& v : variants) {
        const std::size_t k = common_prefix(cur, rot, v.word);
        const long g = 2 * static_cast<long>(k) - static_cast<long>(v.word.size());
        if (g > gain) {
          gain = g;
          best = RewriteStep{rot, v.relator, v.inverted, v.offset, k};
        }
      }
    if (!best) break;
    cur = *apply_step(p, cur, *best);
    trace.steps.push_back(*best);
  }
  if (cur.empty()) return trace;

  // Best-first search by length, allowing steps that do not shorten.
  std::size_t longest = 0;
  for (const auto& v : variants) longest = std::max(longest, v.word.size());
  const std::size_t cap = 2 * trace.start.size() + longest;
  struct Node {
    Word word;
    std::size_t parent;
    RewriteStep step;
  };
  std::vector<Node> nodes{{trace.start, 0, {}}};
  std::set<Word> seen{least_rotation(trace.start)};
  using Key = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
  open.push({trace.start.size(), 0});
  std::size_t expanded = 0;
  while (!open.empty() && expanded < max_steps) {
    const std::size_t at = open.top().second;
    open.pop();
    ++expanded;
    const Word here = nodes[at].word;
    for (std::size_t rot = 0; rot < here.size(); ++rot)
      for (const auto& v : variants) {
        const std::size_t k = common_prefix(here, rot, v.word);
        if (k == 0) continue;
        RewriteStep s{rot, v.relator, v.inverted, v.offset, k};
        Word next = *apply_step(p, here, s);
        if (next.size() > cap || !seen.insert(least_rotation(next)).second) continue;
        nodes.push_back({next, at, s});
        if (next.empty()) {
          RewriteTrace out;
          out.start = trace.start;
          for (std::size_t i = nodes.size() - 1; i != 0; i = nodes[i].parent) out.steps.push_back(nodes[i].step);
          std::reverse(out.steps.begin(), out.steps.end());
          return out;
        }
        open.push({next.size(), nodes.size() - 1});
      }
  }
  return std::nullopt;
}

bool replay_rewrite(const Presentation& p, const Word& w, const RewriteTrace& t) {
  if (t.start != cyclic_reduce(w)) return false;
  Word cur = t.start;
  for (const auto& s : t.steps) {
    auto next = apply_step(p, cur, s);
    if (!next) return false;
    cur = *next;
  }
  return cur.empty();
}

// ---------------------------------------------------------------- Todd-Coxeter

int CosetTable::act(int coset, const Word& w) const {
  for (int l : w) {
    if (coset < 0) return -1;
    coset = rows[static_cast<std::size_t>(coset)][static_cast<std::size_t>(col(l))];
  }
  return coset;
}

namespace {

struct Enumerator {
  std::size_t ncols;
  std::size_t limit;
  std::vector<std::vector<int>> tab;
  std::vector<int> parent;
  bool overflow = false;

  int rep(int c) {
    int r = c;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    while (parent[static_cast<std::size_t>(c)] != r) {
      int nx = parent[static_cast<std::size_t>(c)];
      parent[static_cast<std::size_t>(c)] = r;
      c = nx;
    }
    return r;
  }
  bool live(int c) const { return parent[static_cast<std::size_t>(c)] == c; }
  int& at(int c, int x) { return tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)]; }

  bool define(int c, int x) {
    if (tab.size() >= limit) {
      overflow = true;
      return false;
    }
    const int d = static_cast<int>(tab.size());
    tab.emplace_back(ncols, -1);
    parent.push_back(d);
    at(c, x) = d;
    at(d, x ^ 1) = c;
    return true;
  }

  void merge(int k, int l, std::vector<int>& q) {
    int a = rep(k), b = rep(l);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    q.push_back(b);
  }

  void coincidence(int a, int b) {
    std::vector<int> q;
    merge(a, b, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const int g = q[i];
      for (int x = 0; x < static_cast<int>(ncols); ++x) {
        const int d = at(g, x);
        if (d < 0) continue;
        at(d, x ^ 1) = -1;
        const int mu = rep(g), nu = rep(d);
        if (at(mu, x) >= 0)
          merge(nu, at(mu, x), q);
        else if (at(nu, x ^ 1) >= 0)
          merge(mu, at(nu, x ^ 1), q);
        else {
          at(mu, x) = nu;
          at(nu, x ^ 1) = mu;
        }
      }
    }
  }

  // Returns false on overflow.
  bool scan_and_fill(int alpha, const std::vector<int>& w) {
    const int r = static_cast<int>(w.size());
    int f = alpha, b = alpha, i = 0, j = r - 1;
    for (;;) {
      while (i < r && at(f, w[static_cast<std::size_t>(i)]) >= 0) f = at(f, w[static_cast<std::size_t>(i++)]);
      if (i >= r) {
        if (f != alpha) coincidence(f, alpha);
        return true;
      }
      while (j >= i && at(b, w[static_cast<std::size_t>(j)] ^ 1) >= 0) b = at(b, w[static_cast<std::size_t>(j--)] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        at(f, w[static_cast<std::size_t>(i)]) = b;
        at(b, w[static_cast<std::size_t>(i)] ^ 1) = f;
        return true;
      }
      if (!define(f, w[static_cast<std::size_t>(i)])) return false;
    }
  }
};

}  // namespace

std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup,
                                       std::size_t max_cosets) {
  Enumerator e;
  e.ncols = 2 * p.generators;
  e.limit = std::max<std::size_t>(max_cosets, 1);
  e.tab.emplace_back(e.ncols, -1);
  e.parent.push_back(0);
  const auto rels = relator_cols(p);
  for (const Word& h : subgroup) {
    Word hr = reduce(h);
    if (!hr.empty() && !e.scan_and_fill(0, cols_of(hr))) return std::nullopt;
  }
  for (int c = 0; c < static_cast<int>(e.tab.size()); ++c) {
    for (const auto& r : rels) {
      if (!e.live(c)) break;
      if (!e.scan_and_fill(c, r)) return std::nullopt;
    }
    for (int x = 0; x < static_cast<int>(e.ncols) && e.live(c); ++x)
      if (e.at(c, x) < 0 && !e.define(c, x)) return std::nullopt;
  }
  std::vector<int> index(e.tab.size(), -1);
  int n = 0;
  for (int c = 0; c < static_cast<int>(e.tab.size()); ++c)
    if (e.live(c)) index[static_cast<std::size_t>(c)] = n++;
  CosetTable t;
  t.generators = p.generators;
  for (int c = 0; c < static_cast<int>(e.tab.size()); ++c) {
    if (!e.live(c)) continue;
    std::vector<int> row(e.ncols);
    for (std::size_t x = 0; x < e.ncols; ++x) {
      int d = e.tab[static_cast<std::size_t>(c)][x];
      row[x] = d < 0 ? -1 : index[static_cast<std::size_t>(e.rep(d))];
    }
    t.rows.push_back(row);
  }
  if (!verify_coset_table(p, subgroup, t)) return std::nullopt;
  return t;
}

bool verify_coset_table(const Presentation& p, const std::vector<Word>& subgroup, const CosetTable& t) {
  if (t.generators != p.generators || t.rows.empty()) return false;
  const int n = static_cast<int>(t.size());
  for (int c = 0; c < n; ++c) {
    const auto& row = t.rows[static_cast<std::size_t>(c)];
    if (row.size() != 2 * p.generators) return false;
    for (std::size_t x = 0; x < row.size(); ++x) {
      if (row[x] < 0 || row[x] >= n) return false;
      if (t.rows[static_cast<std::size_t>(row[x])][x ^ 1] != c) return false;
    }
  }
  for (const Word& r : p.relators)
    for (int c = 0; c < n; ++c)
      if (t.act(c, r) != c) return false;
  for (const Word& h : subgroup)
    if (t.act(0, h) != 0) return false;
  return true;
}

// ---------------------------------------------------------------- quotients

Permutation PermRep::eval(const Word& w) const {
  Permutation p(degree);
  for (std::size_t c = 0; c < degree; ++c) {
    int x = static_cast<int>(c);
    for (int l : w) {
      const Permutation& img = images[gen_of(l)];
      if (l > 0) {
        x = img[static_cast<std::size_t>(x)];
      } else {
        x = static_cast<int>(std::find(img.begin(), img.end(), x) - img.begin());
      }
    }
    p[c] = x;
  }
  return p;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

bool verify_rep(const Presentation& p, const PermRep& r) {
  if (r.images.size() != p.generators) return false;
  for (const auto& img : r.images) {
    if (img.size() != r.degree) return false;
    std::vector<bool> hit(r.degree, false);
    for (int x : img) {
      if (x < 0 || static_cast<std::size_t>(x) >= r.degree || hit[static_cast<std::size_t>(x)]) return false;
      hit[static_cast<std::size_t>(x)] = true;
    }
  }
  for (const Word& rel : p.relators)
    if (!is_identity(r.eval(rel))) return false;
  return true;
}

namespace {

// Right-action composition: first a then b.
Permutation then(const Permutation& a, const Permutation& b) {
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[static_cast<std::size_t>(a[i])];
  return out;
}

}  // namespace

std::vector<Permutation> generated_subgroup(const PermRep& r, const std::vector<Word>& gens) {
  Permutation id(r.degree);
  for (std::size_t i = 0; i < r.degree; ++i) id[i] = static_cast<int>(i);
  std::vector<Permutation> g;
  for (const Word& w : gens) g.push_back(r.eval(w));
  std::set<Permutation> seen{id};
  std::vector<Permutation> out{id};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : g) {
      Permutation nx = then(out[i], s);
      if (seen.insert(nx).second) out.push_back(nx);
    }
  return out;
}

namespace {

struct LowIndex {
  std::vector<std::vector<int>> rels;
  std::size_t ncols = 0, n = 0, used = 0, nodes = 0, max_nodes = 0;
  std::vector<std::vector<int>> tab;
  std::vector<std::pair<int, int>> trail;
  const std::function<bool(const PermRep&)>* want = nullptr;
  std::optional<PermRep> found;

  bool set(int c, int x, int d) {
    int& fwd = tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)];
    int& bwd = tab[static_cast<std::size_t>(d)][static_cast<std::size_t>(x ^ 1)];
    if (fwd >= 0) return fwd == d;
    if (bwd >= 0) return bwd == c;
    fwd = d;
    bwd = c;
    trail.push_back({c, x});
    trail.push_back({d, x ^ 1});
    return true;
  }
  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      auto [c, x] = trail.back();
      trail.pop_back();
      tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)] = -1;
    }
  }
  int at(int c, int x) const { return tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)]; }

  bool propagate() {
    for (bool changed = true; changed;) {
      changed = false;
      for (int p = 0; p < static_cast<int>(used); ++p) {
        for (const auto& r : rels) {
          const int L = static_cast<int>(r.size());
          int f = p, i = 0;
          while (i < L && at(f, r[static_cast<std::size_t>(i)]) >= 0) f = at(f, r[static_cast<std::size_t>(i++)]);
          if (i == L) {
            if (f != p) return false;
            continue;
          }
          int b = p, j = L - 1;
          while (j >= i && at(b, r[static_cast<std::size_t>(j)] ^ 1) >= 0) b = at(b, r[static_cast<std::size_t>(j--)] ^ 1);
          if (j < i) {
            if (f != b) return false;
          } else if (j == i) {
            if (!set(f, r[static_cast<std::size_t>(i)], b)) return false;
            changed = true;
          }
        }
      }
    }
    return true;
  }

  bool search() {
    if (++nodes > max_nodes) return false;
    int c = -1, x = -1;
    for (int p = 0; p < static_cast<int>(used) && c < 0; ++p)
      for (int y = 0; y < static_cast<int>(ncols); ++y)
        if (at(p, y) < 0) {
          c = p;
          x = y;
          break;
        }
    if (c < 0) {
      if (used != n) return false;
      PermRep r;
      r.degree = n;
      for (std::size_t g = 0; g < ncols / 2; ++g) {
        Permutation img(n);
        for (std::size_t q = 0; q < n; ++q) img[q] = tab[q][2 * g];
        r.images.push_back(img);
      }
      if ((*want)(r)) {
        found = r;
        return true;
      }
      return false;
    }
    for (int d = 0; d <= static_cast<int>(used) && d < static_cast<int>(n); ++d) {
      if (d < static_cast<int>(used) && at(d, x ^ 1) >= 0) continue;
      const std::size_t mark = trail.size(), old_used = used;
      if (d == static_cast<int>(used)) ++used;
      if (set(c, x, d) && propagate() && search()) return true;
      undo(mark);
      used = old_used;
      if (nodes > max_nodes) return false;
    }
    return false;
  }
};

}  // namespace

std::optional<PermRep> find_quotient(const Presentation& p, const std::function<bool(const PermRep&)>& want,
                                     std::size_t max_degree, std::size_t max_nodes) {
  const auto rels = relator_cols(p);
  std::size_t nodes = 0;
  for (std::size_t n = 2; n <= max_degree; ++n) {
    LowIndex s;
    s.rels = rels;
    s.ncols = 2 * p.generators;
    s.n = n;
    s.used = 1;
    s.max_nodes = max_nodes - nodes;
    s.tab.assign(n, std::vector<int>(s.ncols, -1));
    s.want = &want;
    if (p.generators == 0) return std::nullopt;
    bool ok = s.propagate() && s.search();
    nodes += s.nodes;
    if (ok) return s.found;
    if (nodes >= max_nodes) return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- verdicts

std::string to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
  }
  return "?";
}

std::string to_string(CertKind k) {
  switch (k) {
    case CertKind::abelianization: return "abelianization";
    case CertKind::rewriting: return "rewriting";
    case CertKind::coset_table: return "coset_table";
    case CertKind::finite_quotient: return "finite_quotient";
    case CertKind::literal: return "literal";
    case CertKind::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

Word expand_factor(const std::vector<Word>& gens, const Word& factor) {
  Word out;
  for (int l : factor) {
    const Word& g = gens.at(gen_of(l));
    out = concat(out, l > 0 ? g : inverse(g));
  }
  return out;
}

namespace {

// Reduced words over k subgroup generators of length <= depth, by length
// then lexicographically.
std::vector<Word> factor_words(std::size_t k, std::size_t depth) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (std::size_t g = 0; g < k; ++g)
        for (bool inv : {false, true}) {
          int l = letter(g, inv);
          if (!w.empty() && w.back() == -l) continue;
          Word x = w;
          x.push_back(l);
          next.push_back(x);
        }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Literal factorizations try many candidates; each gets a short search.
std::size_t literal_steps(const Budget& b) { return std::min<std::size_t>(b.rewrite_steps, 50); }

// A few small quotients; a candidate that is not the identity in one of
// them cannot rewrite to 1, so the search skips it.
struct Sieve {
  std::vector<PermRep> reps;
  Sieve(const Presentation& p, const Budget& b) {
    if (p.generators == 0) return;
    find_quotient(
        p,
        [&](const PermRep& r) {
          reps.push_back(r);
          return reps.size() >= 24;
        },
        std::min<std::size_t>(b.quotient_degree, 4), std::min<std::size_t>(b.quotient_nodes, 20000));
  }
  bool may_be_trivial(const Word& w) const {
    return std::all_of(reps.begin(), reps.end(), [&](const PermRep& r) { return is_identity(r.eval(w)); });
  }
};

bool trivial_by_rewriting(const Presentation& p, const Word& w, std::size_t steps, RewriteTrace* trace) {
  auto t = rewrite_to_identity(p, w, steps);
  if (!t) return false;
  if (trace) *trace = *t;
  return true;
}

IntMatrix stacked(const Presentation& p, std::initializer_list<const std::vector<Word>*> groups) {
  IntMatrix m = relator_matrix(p);
  for (const auto* g : groups)
    for (const Word& w : *g) m.push_back(exponent_vector(w, p.generators));
  return m;
}

std::set<Permutation> product_set(const PermRep& r, const std::vector<Word>& h2, const std::vector<Word>& h1) {
  std::set<Permutation> out;
  auto a = generated_subgroup(r, h2), b = generated_subgroup(r, h1);
  for (const auto& x : a)
    for (const auto& y : b) out.insert(then(x, y));
  return out;
}

bool in_generated(const PermRep& r, const std::vector<Word>& gens, const Permutation& x) {
  auto g = generated_subgroup(r, gens);
  return std::find(g.begin(), g.end(), x) != g.end();
}

// Orbit of coset 0 under the subgroup generated by the words.
std::set<int> orbit_of_zero(const CosetTable& t, const std::vector<Word>& gens) {
  std::set<int> seen{0};
  std::vector<int> todo{0};
  while (!todo.empty()) {
    int c = todo.back();
    todo.pop_back();
    for (const Word& g : gens)
      for (const Word& x : {g, inverse(g)}) {
        int d = t.act(c, x);
        if (seen.insert(d).second) todo.push_back(d);
      }
  }
  return seen;
}

}  // namespace

GroupVerdict decide_word(const Presentation& p, const Word& w0, const Budget& b) {
  GroupVerdict v;
  const Word w = reduce(w0);
  auto img = word_image(p, w);
  if (!is_zero(img)) {
    v.answer = Answer::yes;
    v.certificate.kind = CertKind::abelianization;
    v.certificate.image = img;
    v.log.push_back("abelianization: nontrivial image");
    return v;
  }
  v.log.push_back("abelianization: image 0");
  // Trying both w and w^-1 keeps the verdict symmetric under inversion.
  if (trivial_by_rewriting(p, w, b.rewrite_steps, &v.certificate.trace) ||
      trivial_by_rewriting(p, inverse(w), b.rewrite_steps, &v.certificate.trace)) {
    v.answer = Answer::no;
    v.certificate.kind = CertKind::rewriting;
    v.log.push_back("rewriting: reduced to 1");
    return v;
  }
  v.log.push_back("rewriting: stuck");
  if (auto t = todd_coxeter(p, {}, b.coset_nodes)) {
    v.answer = t->act(0, w) != 0 ? Answer::yes : Answer::no;
    v.certificate.kind = CertKind::coset_table;
    v.certificate.table = *t;
    v.log.push_back("todd-coxeter: " + std::to_string(t->size()) + " cosets");
    return v;
  }
  v.log.push_back("todd-coxeter: coset limit reached");
  auto q = find_quotient(
      p, [&](const PermRep& r) { return !is_identity(r.eval(w)); }, b.quotient_degree, b.quotient_nodes);
  if (q) {
    v.answer = Answer::yes;
    v.certificate.kind = CertKind::finite_quotient;
    v.certificate.rep = *q;
    v.log.push_back("quotient: degree " + std::to_string(q->degree));
    return v;
  }
  v.log.push_back("quotient: none found");
  v.certificate.kind = CertKind::budget_exhausted;
  return v;
}

GroupVerdict decide_membership(const Presentation& p, const std::vector<Word>& h, const Word& w0, const Budget& b) {
  GroupVerdict v;
  const Word w = reduce(w0);
  if (!in_row_space(stacked(p, {&h}), exponent_vector(w, p.generators))) {
    v.answer = Answer::no;
    v.certificate.kind = CertKind::abelianization;
    v.certificate.image = word_image(p, w);
    v.log.push_back("abelianization: outside the subgroup lattice");
    return v;
  }
  v.log.push_back("abelianization: inside the subgroup lattice");
  const Sieve sieve(p, b);
  for (const Word& f : factor_words(h.size(), b.literal_depth)) {
    RewriteTrace tr;
    const Word rest = concat(w, inverse(expand_factor(h, f)));
    if (sieve.may_be_trivial(rest) && trivial_by_rewriting(p, rest, literal_steps(b), &tr)) {
      v.answer = Answer::yes;
      v.certificate.kind = CertKind::literal;
      v.certificate.factor1 = f;
      v.certificate.trace = tr;
      v.log.push_back("literal: w = " + format_word(f) + " in subgroup generators");
      return v;
    }
  }
  v.log.push_back("literal: no factorization up to depth " + std::to_string(b.literal_depth));
  if (auto t = todd_coxeter(p, h, b.coset_nodes)) {
    v.answer = t->act(0, w) == 0 ? Answer::yes : Answer::no;
    v.certificate.kind = CertKind::coset_table;
    v.certificate.table = *t;
    v.log.push_back("todd-coxeter: index " + std::to_string(t->size()));
    return v;
  }
  v.log.push_back("todd-coxeter: coset limit reached");
  auto q = find_quotient(
      p, [&](const PermRep& r) { return !in_generated(r, h, r.eval(w)); }, b.quotient_degree, b.quotient_nodes);
  if (q) {
    v.answer = Answer::no;
    v.certificate.kind = CertKind::finite_quotient;
    v.certificate.rep = *q;
    v.log.push_back("quotient: separated in degree " + std::to_string(q->degree));
    return v;
  }
  v.log.push_back("quotient: none found");
  v.certificate.kind = CertKind::budget_exhausted;
  return v;
}

GroupVerdict decide_double_coset(const Presentation& p, const std::vector<Word>& h1, const std::vector<Word>& h2,
                                 const Word& w0, const Budget& b) {
  GroupVerdict v;
  const Word w = reduce(w0);
  if (!in_row_space(stacked(p, {&h1, &h2}), exponent_vector(w, p.generators))) {
    v.answer = Answer::no;
    v.certificate.kind = CertKind::abelianization;
    v.certificate.image = word_image(p, w);
    v.log.push_back("abelianization: outside the lattice sum");
    return v;
  }
  v.log.push_back("abelianization: inside the lattice sum");
  const auto f2s = factor_words(h2.size(), b.literal_depth);
  const auto f1s = factor_words(h1.size(), b.literal_depth);
  // Short literal factorizations, then quotient separation, then longer ones.
  const Sieve sieve(p, b);
  auto literal = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t total = lo; total <= hi; ++total)
      for (const Word& f2 : f2s)
        for (const Word& f1 : f1s) {
          if (f1.size() + f2.size() != total) continue;
          Word rest = concat(concat(inverse(expand_factor(h2, f2)), w), inverse(expand_factor(h1, f1)));
          RewriteTrace tr;
          if (sieve.may_be_trivial(rest) && trivial_by_rewriting(p, rest, literal_steps(b), &tr)) {
            v.answer = Answer::yes;
            v.certificate.kind = CertKind::literal;
            v.certificate.factor1 = f1;
            v.certificate.factor2 = f2;
            v.certificate.trace = tr;
            v.log.push_back("literal: factorization found at depth " + std::to_string(total));
            return true;
          }
        }
    return false;
  };
  const std::size_t shallow = std::min<std::size_t>(2, 2 * b.literal_depth);
  if (literal(0, shallow)) return v;
  auto q = find_quotient(
      p, [&](const PermRep& r) { return product_set(r, h2, h1).count(r.eval(w)) == 0; }, b.quotient_degree,
      b.quotient_nodes);
  if (q) {
    v.answer = Answer::no;
    v.certificate.kind = CertKind::finite_quotient;
    v.certificate.rep = *q;
    v.log.push_back("literal: no factorization up to depth " + std::to_string(shallow));
    v.log.push_back("quotient: separated in degree " + std::to_string(q->degree));
    return v;
  }
  if (literal(shallow + 1, 2 * b.literal_depth)) return v;
  v.log.push_back("literal: no factorization up to depth " + std::to_string(b.literal_depth));
  v.log.push_back("quotient: none found");
  if (auto t = todd_coxeter(p, h1, b.coset_nodes)) {
    v.answer = orbit_of_zero(*t, h2).count(t->act(0, inverse(w))) ? Answer::yes : Answer::no;
    v.certificate.kind = CertKind::coset_table;
    v.certificate.table = *t;
    v.log.push_back("todd-coxeter: index " + std::to_string(t->size()));
    return v;
  }
  v.log.push_back("todd-coxeter: coset limit reached");
  v.certificate.kind = CertKind::budget_exhausted;
  return v;
}

bool replay_word(const Presentation& p, const Word& w0, const GroupVerdict& v) {
  const Word w = reduce(w0);
  const Certificate& c = v.certificate;
  switch (c.kind) {
    case CertKind::abelianization:
      return v.answer == Answer::yes && c.image == word_image(p, w) && !is_zero(c.image);
    case CertKind::rewriting:
      return v.answer == Answer::no && (replay_rewrite(p, w, c.trace) || replay_rewrite(p, inverse(w), c.trace));
    case CertKind::coset_table:
      if (!verify_coset_table(p, {}, c.table)) return false;
      return (c.table.act(0, w) != 0) == (v.answer == Answer::yes) && v.answer != Answer::unknown;
    case CertKind::finite_quotient:
      return v.answer == Answer::yes && verify_rep(p, c.rep) && !is_identity(c.rep.eval(w));
    case CertKind::literal:
      return false;
    case CertKind::budget_exhausted:
      return v.answer == Answer::unknown;
  }
  return false;
}

bool replay_membership(const Presentation& p, const std::vector<Word>& h, const Word& w0, const GroupVerdict& v) {
  const Word w = reduce(w0);
  const Certificate& c = v.certificate;
  switch (c.kind) {
    case CertKind::abelianization:
      return v.answer == Answer::no && !in_row_space(stacked(p, {&h}), exponent_vector(w, p.generators));
    case CertKind::literal:
      return v.answer == Answer::yes && replay_rewrite(p, concat(w, inverse(expand_factor(h, c.factor1))), c.trace);
    case CertKind::coset_table:
      if (!verify_coset_table(p, h, c.table) || v.answer == Answer::unknown) return false;
      return (c.table.act(0, w) == 0) == (v.answer == Answer::yes);
    case CertKind::finite_quotient:
      return v.answer == Answer::no && verify_rep(p, c.rep) && !in_generated(c.rep, h, c.rep.eval(w));
    case CertKind::rewriting:
      return false;
    case CertKind::budget_exhausted:
      return v.answer == Answer::unknown;
  }
  return false;
}

bool replay_double_coset(const Presentation& p, const std::vector<Word>& h1, const std::vector<Word>& h2,
                         const Word& w0, const GroupVerdict& v) {
  const Word w = reduce(w0);
  const Certificate& c = v.certificate;
  switch (c.kind) {
    case CertKind::abelianization:
      return v.answer == Answer::no && !in_row_space(stacked(p, {&h1, &h2}), exponent_vector(w, p.generators));
    case CertKind::literal: {
      Word rest = concat(concat(inverse(expand_factor(h2, c.factor2)), w), inverse(expand_factor(h1, c.factor1)));
      return v.answer == Answer::yes && replay_rewrite(p, rest, c.trace);
    }
    case CertKind::coset_table:
      if (!verify_coset_table(p, h1, c.table) || v.answer == Answer::unknown) return false;
      return (orbit_of_zero(c.table, h2).count(c.table.act(0, inverse(w))) != 0) == (v.answer == Answer::yes);
    case CertKind::finite_quotient:
      return v.answer == Answer::no && verify_rep(p, c.rep) && product_set(c.rep, h2, h1).count(c.rep.eval(w)) == 0;
    case CertKind::rewriting:
      return false;
    case CertKind::budget_exhausted:
      return v.answer == Answer::unknown;
  }
  return false;
}

// ---------------------------------------------------------------- JSON

std::string verdict_json(const GroupVerdict& v) {
  using nlohmann::json;
  json j;
  j["answer"] = to_string(v.answer);
  const Certificate& c = v.certificate;
  json cert;
  cert["kind"] = to_string(c.kind);
  switch (c.kind) {
    case CertKind::abelianization: {
      json img = json::array();
      for (const auto& x : c.image) img.push_back(x.get_str());
      cert["image"] = img;
      break;
    }
    case CertKind::literal:
      cert["factor1"] = c.factor1;
      cert["factor2"] = c.factor2;
      [[fallthrough]];
    case CertKind::rewriting: {
      json steps = json::array();
      for (const auto& s : c.trace.steps) steps.push_back({s.rotate, s.relator, s.inverted, s.offset, s.length});
      cert["start"] = c.trace.start;
      cert["steps"] = steps;
      break;
    }
    case CertKind::coset_table:
      cert["generators"] = c.table.generators;
      cert["table"] = c.table.rows;
      break;
    case CertKind::finite_quotient:
      cert["degree"] = c.rep.degree;
      cert["images"] = c.rep.images;
      break;
    case CertKind::budget_exhausted:
      break;
  }
  j["certificate"] = cert;
  j["log"] = v.log;
  return j.dump();
}

GroupVerdict verdict_from_json(const std::string& text) {
  using nlohmann::json;
  json j = json::parse(text);
  GroupVerdict v;
  const std::string a = j.at("answer");
  v.answer = a == "yes" ? Answer::yes : a == "no" ? Answer::no : Answer::unknown;
  const json& cert = j.at("certificate");
  const std::string kind = cert.at("kind");
  Certificate& c = v.certificate;
  for (CertKind k : {CertKind::abelianization, CertKind::rewriting, CertKind::coset_table, CertKind::finite_quotient,
                     CertKind::literal, CertKind::budget_exhausted})
    if (to_string(k) == kind) c.kind = k;
  if (cert.contains("image"))
    for (const auto& x : cert["image"]) c.image.emplace_back(x.get<std::string>());
  if (cert.contains("start")) c.trace.start = cert["start"].get<Word>();
  if (cert.contains("steps"))
    for (const auto& s : cert["steps"])
      c.trace.steps.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>(), s[2].get<bool>(),
                               s[3].get<std::size_t>(), s[4].get<std::size_t>()});
  if (cert.contains("factor1")) c.factor1 = cert["factor1"].get<Word>();
  if (cert.contains("factor2")) c.factor2 = cert["factor2"].get<Word>();
  if (cert.contains("table")) {
    c.table.generators = cert.at("generators");
    c.table.rows = cert["table"].get<std::vector<std::vector<int>>>();
  }
  if (cert.contains("images")) {
    c.rep.degree = cert.at("degree");
    c.rep.images = cert["images"].get<std::vector<Permutation>>();
  }
  if (j.contains("log")) v.log = j["log"].get<std::vector<std::string>>();
  return v;
}

}  // namespace esstri::pi1
