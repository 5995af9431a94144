#include "esstri/certify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "esstri/angles.hpp"
#include "esstri/skeleton.hpp"

namespace esstri::certify {

using pi1::Word;
using tri::Skeleton;
using tri::Triangulation;

std::string to_string(Tag t) {
  switch (t) {
    case Tag::none: return "none";
    case Tag::strict_angle: return "strict_angle";
    case Tag::semi_angle: return "semi_angle";
    case Tag::homology: return "homology";
    case Tag::pillow_homotopy: return "pillow_homotopy";
    case Tag::distinct_cusps: return "distinct_cusps";
    case Tag::geometric_endpoints: return "geometric_endpoints";
    case Tag::group_word: return "group(word)";
    case Tag::group_membership: return "group(membership)";
    case Tag::group_double_coset: return "group(double_coset)";
    case Tag::budget_exhausted: return "budget_exhausted";
  }
  return "none";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::lp: return "lp";
    case Method::homology: return "homology";
    case Method::combinatorial: return "combinatorial";
    case Method::geometry: return "geometry";
    case Method::group: return "group";
  }
  return "";
}

std::vector<Method> parse_methods(const std::string& spec) {
  std::vector<Method> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    bool found = false;
    for (Method m : {Method::lp, Method::homology, Method::combinatorial, Method::geometry, Method::group})
      if (to_string(m) == item) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        found = true;
      }
    if (!found) throw CertifyError("unknown method '" + item + "'");
  }
  // consultation order is fixed
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> IdealContext::peripheral_gens(std::size_t vertex) const {
  std::vector<Word> out;
  for (const auto& c : peripheral.at(vertex).curves) out.push_back(c.word);
  return out;
}

namespace {

std::size_t link_index(const tri::VertexLink& v, std::size_t tet, int vertex) {
  const std::array<std::size_t, 2> key{tet, static_cast<std::size_t>(vertex)};
  auto it = std::lower_bound(v.triangles.begin(), v.triangles.end(), key);
  if (it == v.triangles.end() || *it != key) throw CertifyError("corner triangle missing from link");
  return static_cast<std::size_t>(it - v.triangles.begin());
}

enum class Kind { closed, ideal };

Kind check_input(const Triangulation& t, const Skeleton& sk) {
  if (t.size() == 0) throw CertifyError("empty triangulation");
  if (!tri::validate(t).ok()) throw CertifyError("triangulation is not valid with all faces glued");
  if (!sk.all_edges_valid()) throw CertifyError("an edge is identified with itself in reverse");
  bool all_torus = true;
  for (const auto& v : sk.vertices)
    if (v.kind != tri::SurfaceKind::torus) all_torus = false;
  if (all_torus) return Kind::ideal;
  if (sk.vertex_count() == 1 && sk.vertices[0].kind == tri::SurfaceKind::sphere) return Kind::closed;
  if (std::all_of(sk.vertices.begin(), sk.vertices.end(),
                  [](const tri::VertexLink& v) { return v.kind == tri::SurfaceKind::sphere; }))
    throw CertifyError("closed triangulations with more than one vertex are not supported");
  throw CertifyError("unsupported vertex links: need all tori or a single sphere");
}

Answer flip(Answer a) {
  if (a == Answer::yes) return Answer::no;
  if (a == Answer::no) return Answer::yes;
  return a;
}

std::string word_text(const Word& w) { return w.empty() ? std::string("1") : pi1::format_word(w); }

// Pick the first conclusive source; with all_sources every listed source
// runs and the first conclusive one still decides.
template <class V>
void settle(V& v, Answer V::*field) {
  for (const auto& s : v.sources)
    if (s.answer != Answer::unknown) {
      v.*field = s.answer;
      v.tag = s.tag;
      v.detail = s.detail;
      return;
    }
  v.*field = Answer::unknown;
  v.tag = Tag::budget_exhausted;
}

// ------------------------------------------------------------ shared state

struct Engine {
  const Triangulation& t;
  const Options& opt;
  Skeleton sk;
  Kind kind = Kind::closed;

  // closed
  pi1::Presentation closed_pres;
  // ideal
  std::optional<IdealContext> ideal;
  // group searches run on the simplified presentation
  pi1::Simplified simp;
  pi1::IntMatrix relmat;

  std::optional<angles::LPOutcome> strict_lp, semi_lp;
  std::optional<geom::DevelopReport> dev;
  std::string geom_failure;
  bool geom_done = false;

  std::vector<std::string> log;

  Engine(const Triangulation& tt, const Options& o) : t(tt), opt(o), sk(tri::build_skeleton(tt)) {
    kind = check_input(t, sk);
    if (kind == Kind::closed) {
      closed_pres = pi1::presentation_closed(t);
      simp = pi1::simplify_presentation(closed_pres);
      relmat = pi1::relator_matrix(closed_pres);
    } else {
      ideal = build_ideal_context(t);
      simp = pi1::simplify_presentation(ideal->spine.pres);
      relmat = pi1::relator_matrix(ideal->spine.pres);
    }
  }

  bool uses(Method m) const { return std::find(opt.methods.begin(), opt.methods.end(), m) != opt.methods.end(); }
  std::size_t gens() const { return kind == Kind::closed ? closed_pres.generators : ideal->spine.pres.generators; }

  Word edge_word(std::size_t e) const {
    return kind == Kind::closed ? Word{pi1::letter(e)} : ideal->edges[e].word;
  }

  const angles::LPOutcome& lp(angles::Mode m) {
    auto& slot = m == angles::Mode::strict ? strict_lp : semi_lp;
    if (!slot) {
      slot = angles::solve_angle_lp(t, m);
      log.push_back(std::string("lp ") + (m == angles::Mode::strict ? "strict" : "semi") + ": " +
                    (slot->feasible ? "feasible" : "infeasible") +
                    (slot->optimum ? " (t* = " + angles::format_rational(*slot->optimum) + ")" : ""));
    }
    return *slot;
  }

  const geom::DevelopReport* geometry() {
    if (geom_done) return dev ? &*dev : nullptr;
    geom_done = true;
    if (kind != Kind::ideal) {
      geom_failure = "geometry needs an ideal triangulation";
    } else if (!opt.shapes) {
      geom_failure = "no shapes given";
    } else {
      try {
        auto rep = geom::verify_shapes(t, *opt.shapes);
        if (!rep.ok()) {
          geom_failure = "shapes do not satisfy the gluing equations";
        } else {
          dev = geom::develop_and_scan(t, *opt.shapes, opt.radius);
          if (!dev->positive_or_flat) {
            geom_failure = "some shape has negative imaginary part";
            dev.reset();
          }
        }
      } catch (const geom::GeomError& e) {
        geom_failure = e.what();
      }
    }
    log.push_back(dev ? "geometry: shapes verified, developed to radius " + std::to_string(opt.radius)
                      : "geometry: " + geom_failure);
    return dev ? &*dev : nullptr;
  }

  bool in_lattice(const Word& w, const std::vector<Word>& extra) const {
    pi1::IntMatrix m = relmat;
    for (const auto& x : extra) m.push_back(pi1::exponent_vector(x, gens()));
    return pi1::in_row_space(m, pi1::exponent_vector(w, gens()));
  }

  std::vector<Word> mapped(const std::vector<Word>& ws) const {
    std::vector<Word> out;
    for (const auto& w : ws) out.push_back(pi1::map_word(simp, w));
    return out;
  }
};

// ------------------------------------------------------------ edges

// Sources for "edge e is essential".
void edge_sources(Engine& en, EdgeVerdict& v) {
  auto done = [&] {
    return !en.opt.all_sources && std::any_of(v.sources.begin(), v.sources.end(), [](const SourceResult& s) {
             return s.answer != Answer::unknown;
           });
  };
  const std::size_t e = v.edge;
  const Word w = en.edge_word(e);
  const bool ideal = en.kind == Kind::ideal;
  const IdealContext* ic = ideal ? &*en.ideal : nullptr;
  const bool loop = !ideal || ic->edges[e].from == ic->edges[e].to;

  if (ideal && !loop) {
    v.sources.push_back({Tag::distinct_cusps, Answer::yes,
                         "ends on cusps " + std::to_string(ic->edges[e].from) + " and " + std::to_string(ic->edges[e].to)});
    if (done()) return;
  }
  if (en.uses(Method::homology) && loop) {
    std::vector<Word> periph = ideal ? ic->peripheral_gens(ic->edges[e].from) : std::vector<Word>{};
    if (!en.in_lattice(w, periph))
      v.sources.push_back({Tag::homology, Answer::yes, "image of " + word_text(w) + " outside the peripheral lattice"});
    else
      v.sources.push_back({Tag::homology, Answer::unknown, ""});
    if (done()) return;
  }
  if (en.uses(Method::geometry) && ideal) {
    if (const auto* d = en.geometry()) {
      // every lift lies in a developed tetrahedron; one with distinct ends suffices
      bool coincide = std::any_of(d->coincident.begin(), d->coincident.end(),
                                  [&](const geom::EdgeLift& l) { return l.edge_class == e; });
      SourceResult s;
      s.tag = Tag::geometric_endpoints;
      s.answer = coincide ? Answer::no : Answer::yes;
      s.detail = coincide ? "a developed lift has coincident endpoints" : "developed endpoints are distinct";
      v.sources.push_back(s);
    } else {
      v.sources.push_back({Tag::geometric_endpoints, Answer::unknown, en.geom_failure});
    }
    if (done()) return;
  }
  if (en.uses(Method::group) && loop) {
    GroupQuery q;
    q.word = pi1::map_word(en.simp, w);
    SourceResult s;
    if (!ideal) {
      q.verdict = pi1::decide_word(en.simp.pres, q.word, en.opt.budget);
      s.answer = q.verdict.answer;  // nontrivial = essential
      s.tag = Tag::group_word;
      s.detail = "word " + word_text(q.word);
    } else {
      q.h1 = en.mapped(ic->peripheral_gens(ic->edges[e].from));
      q.verdict = pi1::decide_membership(en.simp.pres, q.h1, q.word, en.opt.budget);
      s.answer = flip(q.verdict.answer);
      s.tag = Tag::group_membership;
      s.detail = "membership of " + word_text(q.word) + " in the peripheral subgroup";
    }
    s.detail += ": " + pi1::to_string(q.verdict.certificate.kind);
    if (s.answer == Answer::unknown) s.tag = Tag::budget_exhausted;
    s.group.push_back(q);
    v.sources.push_back(s);
  }
}

// ------------------------------------------------------------ pairs

struct Orientation {
  Word gamma, delta;
  std::size_t a = 0, b = 0;
};

// The ways the two edges can be compared: delta either way round when its
// ends match gamma's.
std::vector<Orientation> orientations(const Engine& en, std::size_t e1, std::size_t e2) {
  std::vector<Orientation> out;
  if (en.kind == Kind::closed) {
    out.push_back({en.edge_word(e1), en.edge_word(e2), 0, 0});
    out.push_back({en.edge_word(e1), pi1::inverse(en.edge_word(e2)), 0, 0});
    return out;
  }
  const auto& g = en.ideal->edges[e1];
  const auto& d = en.ideal->edges[e2];
  if (g.from == d.from && g.to == d.to) out.push_back({g.word, d.word, g.from, g.to});
  if (g.from == d.to && g.to == d.from) out.push_back({g.word, pi1::inverse(d.word), g.from, g.to});
  return out;
}

void pair_sources(Engine& en, PairVerdict& v, const std::vector<std::pair<std::size_t, std::size_t>>& pillow) {
  auto done = [&] {
    return !en.opt.all_sources && std::any_of(v.sources.begin(), v.sources.end(), [](const SourceResult& s) {
             return s.answer != Answer::unknown;
           });
  };
  const auto ors = orientations(en, v.first, v.second);
  if (ors.empty()) {
    v.sources.push_back({Tag::distinct_cusps, Answer::no, "the edges join different pairs of cusps"});
    if (done()) return;
  }
  if (en.uses(Method::combinatorial)) {
    bool hit = std::find(pillow.begin(), pillow.end(), std::make_pair(v.first, v.second)) != pillow.end();
    v.sources.push_back({Tag::pillow_homotopy, hit ? Answer::yes : Answer::unknown,
                         hit ? "opposite edges of a pillow around a degree-2 edge" : ""});
    if (done()) return;
  }
  if (ors.empty()) return;

  if (en.uses(Method::homology)) {
    bool all_apart = true;
    for (const auto& o : ors) {
      if (en.kind == Kind::closed) {
        if (pi1::is_zero(pi1::word_image(en.closed_pres, pi1::concat(o.gamma, pi1::inverse(o.delta)))))
          all_apart = false;
      } else {
        auto extra = en.ideal->peripheral_gens(o.a);
        for (const auto& x : en.ideal->peripheral_gens(o.b)) extra.push_back(x);
        if (en.in_lattice(pi1::concat(pi1::inverse(o.delta), o.gamma), extra)) all_apart = false;
      }
    }
    v.sources.push_back({Tag::homology, all_apart ? Answer::no : Answer::unknown,
                         all_apart ? "separated in homology" : ""});
    if (done()) return;
  }
  if (en.uses(Method::geometry) && en.kind == Kind::ideal) {
    if (const auto* d = en.geometry()) {
      bool candidate = false;
      for (const auto& p : d->parallel) {
        auto x = std::minmax(p.first.edge_class, p.second.edge_class);
        if (x.first == v.first && x.second == v.second) candidate = true;
      }
      for (const auto& c : d->clusters)
        for (const auto& p : c.parallel_classes) {
          auto x = std::minmax(p.first, p.second);
          if (x.first == v.first && x.second == v.second) candidate = true;
        }
      SourceResult s;
      s.tag = Tag::geometric_endpoints;
      if (candidate) {
        // shared endpoints are only a candidate: distinct cusps of the cover can develop to one point
        s.detail = "lifts share developed endpoints";
      } else if (d->conclusive_for_flat_clusters) {
        s.answer = Answer::no;
        s.detail = "no shared endpoints; flat clusters fully scanned";
      } else {
        s.detail = "no shared endpoints up to radius " + std::to_string(d->radius);
      }
      v.sources.push_back(s);
    } else {
      v.sources.push_back({Tag::geometric_endpoints, Answer::unknown, en.geom_failure});
    }
    if (done()) return;
  }
  if (en.uses(Method::group)) {
    // parallel if some orientation is certified; apart if every one is refuted
    SourceResult s;
    s.tag = en.kind == Kind::closed ? Tag::group_word : Tag::group_double_coset;
    bool all_no = true;
    for (const auto& o : ors) {
      GroupQuery q;
      Answer parallel;
      if (en.kind == Kind::closed) {
        q.word = pi1::map_word(en.simp, pi1::concat(o.gamma, pi1::inverse(o.delta)));
        q.verdict = pi1::decide_word(en.simp.pres, q.word, en.opt.budget);
        parallel = flip(q.verdict.answer);
        s.detail += "word ";
      } else {
        const Word di = pi1::inverse(o.delta);
        std::vector<Word> h2;
        for (const auto& p : en.ideal->peripheral_gens(o.a)) h2.push_back(pi1::concat(pi1::concat(di, p), o.delta));
        q.word = pi1::map_word(en.simp, pi1::concat(di, o.gamma));
        q.h1 = en.mapped(en.ideal->peripheral_gens(o.b));
        q.h2 = en.mapped(h2);
        q.verdict = pi1::decide_double_coset(en.simp.pres, q.h1, q.h2, q.word, en.opt.budget);
        parallel = q.verdict.answer;
        s.detail += "double coset ";
      }
      s.detail += word_text(q.word) + ": " + pi1::to_string(q.verdict.answer) + " (" +
                  pi1::to_string(q.verdict.certificate.kind) + "); ";
      s.group.push_back(q);
      if (parallel == Answer::yes) {
        s.answer = Answer::yes;
        break;
      }
      if (parallel != Answer::no) all_no = false;
    }
    if (s.answer != Answer::yes && all_no) s.answer = Answer::no;
    if (s.answer == Answer::unknown) s.tag = Tag::budget_exhausted;
    v.sources.push_back(s);
  }
}

TriangulationVerdict run(const Triangulation& t, const Options& opt, bool strong) {
  Engine en(t, opt);
  TriangulationVerdict out;
  out.ideal = en.kind == Kind::ideal;
  const std::size_t n = en.sk.edges.size();
  out.log.push_back(std::string(out.ideal ? "ideal" : "closed") + ", " + std::to_string(n) + " edges");

  if (en.uses(Method::lp) && out.ideal) {
    if (strong && en.lp(angles::Mode::strict).feasible)
      out.global = Tag::strict_angle;
    else if (en.lp(angles::Mode::semi).feasible)
      out.global = Tag::semi_angle;
  }

  // strict angles settle everything; semi angles settle essential
  const bool edges_global = out.global == Tag::strict_angle || out.global == Tag::semi_angle;
  for (std::size_t e = 0; e < n; ++e) {
    EdgeVerdict v;
    v.edge = e;
    if (edges_global) v.sources.push_back({out.global, Answer::yes, "global angle structure"});
    if (!edges_global || opt.all_sources) edge_sources(en, v);
    settle(v, &EdgeVerdict::essential);
    out.edges.push_back(v);
  }
  out.essential = Answer::yes;
  for (const auto& v : out.edges) {
    if (v.essential == Answer::no) {
      out.essential = Answer::no;
      break;
    }
    if (v.essential == Answer::unknown) out.essential = Answer::unknown;
  }

  if (strong) {
    const auto pillow = pillow_parallel_pairs(t);
    const bool global = out.global == Tag::strict_angle;
    bool stop = false;
    for (std::size_t a = 0; a < n && !stop; ++a)
      for (std::size_t b = a + 1; b < n && !stop; ++b) {
        PairVerdict v;
        v.first = a;
        v.second = b;
        if (global) v.sources.push_back({Tag::strict_angle, Answer::no, "global angle structure"});
        if (!global || opt.all_sources) pair_sources(en, v, pillow);
        settle(v, &PairVerdict::parallel);
        out.pairs.push_back(v);
        if (v.parallel == Answer::yes && !opt.all_sources) {
          stop = true;
          out.log.push_back("parallel pair found; remaining pairs skipped");
        }
      }
    bool any_yes = false, all_no = true;
    for (const auto& p : out.pairs) {
      if (p.parallel == Answer::yes) any_yes = true;
      if (p.parallel != Answer::no) all_no = false;
    }
    if (out.essential == Answer::no || any_yes)
      out.strongly_essential = Answer::no;
    else if (out.essential == Answer::yes && all_no)
      out.strongly_essential = Answer::yes;
    else
      out.strongly_essential = Answer::unknown;
  }
  for (auto& l : en.log) out.log.push_back(l);
  out.presentation = en.simp.pres;
  return out;
}

nlohmann::json source_json(const SourceResult& s) {
  nlohmann::json j{{"tag", to_string(s.tag)}, {"answer", pi1::to_string(s.answer)}};
  if (!s.detail.empty()) j["detail"] = s.detail;
  for (const auto& q : s.group) {
    nlohmann::json g{{"word", pi1::format_word(q.word)}, {"verdict", nlohmann::json::parse(pi1::verdict_json(q.verdict))}};
    if (!q.h1.empty()) {
      g["h1"] = nlohmann::json::array();
      for (const auto& w : q.h1) g["h1"].push_back(pi1::format_word(w));
    }
    if (!q.h2.empty()) {
      g["h2"] = nlohmann::json::array();
      for (const auto& w : q.h2) g["h2"].push_back(pi1::format_word(w));
    }
    j["group"].push_back(g);
  }
  return j;
}

}  // namespace

IdealContext build_ideal_context(const Triangulation& t) {
  IdealContext c;
  c.skeleton = tri::build_skeleton(t);
  const auto& sk = c.skeleton;
  for (const auto& v : sk.vertices)
    if (v.kind != tri::SurfaceKind::torus) throw CertifyError("every vertex link must be a torus");
  c.spine = pi1::presentation_spine(t, sk);
  for (std::size_t v = 0; v < sk.vertex_count(); ++v) c.peripheral.push_back(pi1::peripheral_words(t, sk, c.spine, v));
  for (const auto& e : sk.edges) {
    const auto& corner = e.corners.front();
    EdgePath p;
    p.edge = e.index;
    p.from = sk.vertex_of[corner.tet][static_cast<std::size_t>(corner.a)];
    p.to = sk.vertex_of[corner.tet][static_cast<std::size_t>(corner.b)];
    const auto& pa = c.peripheral[p.from].tree_paths[link_index(sk.vertices[p.from], corner.tet, corner.a)];
    const auto& pb = c.peripheral[p.to].tree_paths[link_index(sk.vertices[p.to], corner.tet, corner.b)];
    p.word = pi1::reduce(
        pi1::concat(pi1::path_word(c.spine, sk, pa), pi1::inverse(pi1::path_word(c.spine, sk, pb))));
    c.edges.push_back(p);
  }
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> pillow_parallel_pairs(const Triangulation& t) {
  const auto sk = tri::build_skeleton(t);
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : sk.edges) {
    if (e.degree() != 2 || e.boundary) continue;
    const auto& s0 = e.steps[0];
    const auto& s1 = e.steps[1];
    if (s0.tet == s1.tet) continue;
    const auto x = sk.edge_of[s0.tet][static_cast<std::size_t>(tri::edge_index(s0.c, s0.d))].edge;
    const auto y = sk.edge_of[s1.tet][static_cast<std::size_t>(tri::edge_index(s1.c, s1.d))].edge;
    if (x != y) out.insert(std::minmax(x, y));
  }
  return {out.begin(), out.end()};
}

TriangulationVerdict certify_essential(const Triangulation& t, const Options& opt) { return run(t, opt, false); }

TriangulationVerdict certify_strongly_essential(const Triangulation& t, const Options& opt) {
  return run(t, opt, true);
}

bool replay_group_certificates(const TriangulationVerdict& v) {
  auto check = [&](const SourceResult& s) {
    for (const auto& q : s.group) {
      if (q.verdict.answer == Answer::unknown) continue;
      bool ok = false;
      if (s.tag == Tag::group_word)
        ok = pi1::replay_word(v.presentation, q.word, q.verdict);
      else if (s.tag == Tag::group_membership)
        ok = pi1::replay_membership(v.presentation, q.h1, q.word, q.verdict);
      else if (s.tag == Tag::group_double_coset)
        ok = pi1::replay_double_coset(v.presentation, q.h1, q.h2, q.word, q.verdict);
      if (!ok) return false;
    }
    return true;
  };
  for (const auto& e : v.edges)
    for (const auto& s : e.sources)
      if (!check(s)) return false;
  for (const auto& p : v.pairs)
    for (const auto& s : p.sources)
      if (!check(s)) return false;
  return true;
}

std::string verdict_json(const TriangulationVerdict& v) {
  nlohmann::json j;
  j["ideal"] = v.ideal;
  j["essential"] = pi1::to_string(v.essential);
  if (!v.pairs.empty() || v.strongly_essential != Answer::unknown)
    j["strongly_essential"] = pi1::to_string(v.strongly_essential);
  j["global_certificate"] = to_string(v.global);
  j["edges"] = nlohmann::json::array();
  for (const auto& e : v.edges) {
    nlohmann::json x{{"edge", e.edge}, {"essential", pi1::to_string(e.essential)}};
    x["certificate"] = {{"tag", to_string(e.tag)}};
    if (!e.detail.empty()) x["certificate"]["detail"] = e.detail;
    x["sources"] = nlohmann::json::array();
    for (const auto& s : e.sources) x["sources"].push_back(source_json(s));
    j["edges"].push_back(x);
  }
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : v.pairs) {
    nlohmann::json x{{"edges", {p.first, p.second}}, {"parallel", pi1::to_string(p.parallel)}};
    x["certificate"] = {{"tag", to_string(p.tag)}};
    if (!p.detail.empty()) x["certificate"]["detail"] = p.detail;
    x["sources"] = nlohmann::json::array();
    for (const auto& s : p.sources) x["sources"].push_back(source_json(s));
    j["pairs"].push_back(x);
  }
  j["log"] = v.log;
  return j.dump(2);
}

std::string verdict_text(const TriangulationVerdict& v, bool strong) {
  std::ostringstream os;
  const Answer a = strong ? v.strongly_essential : v.essential;
  os << pi1::to_string(a);
  if (v.global != Tag::none && a == Answer::yes && (!strong || v.global == Tag::strict_angle))
    os << " (certificate: " << to_string(v.global) << ")";
  os << "\n";
  for (const auto& e : v.edges)
    os << "  edge " << e.edge << ": " << pi1::to_string(e.essential) << " [" << to_string(e.tag) << "]\n";
  for (const auto& p : v.pairs)
    if (p.parallel != Answer::no || !strong)
      os << "  pair " << p.first << "," << p.second << " parallel: " << pi1::to_string(p.parallel) << " ["
         << to_string(p.tag) << "] " << p.detail << "\n";
  return os.str();
}

}  // namespace esstri::certify
