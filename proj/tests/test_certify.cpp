#include <doctest.h>

#include <random>

#include <json.hpp>

#include "esstri/angles.hpp"
#include "esstri/certify.hpp"
#include "esstri/io.hpp"
#include "esstri/moves.hpp"
#include "esstri/skeleton.hpp"
#include "fixtures.hpp"

using namespace esstri;
using certify::Answer;
using certify::Method;
using certify::Tag;

namespace {

geom::ExactShapes m136_shapes() {
  return geom::parse_shapes(*tri::parse_table_shapes(tri::read_file(fixtures::path("m136.tri"))));
}

// Every resolved source agrees with every other one.
template <class V>
bool sources_agree(const V& v) {
  std::optional<Answer> seen;
  for (const auto& s : v.sources) {
    if (s.answer == Answer::unknown) continue;
    if (seen && *seen != s.answer) return false;
    seen = s.answer;
  }
  return true;
}

void check_consistent(const certify::TriangulationVerdict& v) {
  for (const auto& e : v.edges) {
    INFO("edge " << e.edge);
    CHECK(sources_agree(e));
  }
  for (const auto& p : v.pairs) {
    INFO("pair " << p.first << "," << p.second);
    CHECK(sources_agree(p));
  }
  CHECK(certify::replay_group_certificates(v));
}

}  // namespace

TEST_CASE("methods parse") {
  CHECK(certify::parse_methods("group,lp") == std::vector<Method>{Method::lp, Method::group});
  CHECK(certify::parse_methods("") .empty());
  CHECK_THROWS_AS(certify::parse_methods("lp,magic"), certify::CertifyError);
}

TEST_CASE("figure-8 is strongly essential by strict angles") {
  auto v = certify::certify_strongly_essential(fixtures::fig8());
  CHECK(v.ideal);
  CHECK(v.strongly_essential == Answer::yes);
  CHECK(v.essential == Answer::yes);
  CHECK(v.global == Tag::strict_angle);
  CHECK(v.edges.size() == 2);
  for (const auto& e : v.edges) {
    CHECK(e.tag == Tag::strict_angle);
    REQUIRE(e.sources.size() == 1);
  }
  REQUIRE(v.pairs.size() == 1);
  CHECK(v.pairs[0].parallel == Answer::no);
  CHECK(v.pairs[0].sources.size() == 1);

  certify::Options all;
  all.all_sources = true;
  auto w = certify::certify_strongly_essential(fixtures::fig8(), all);
  CHECK(w.strongly_essential == Answer::yes);
  check_consistent(w);
}

TEST_CASE("figure-8 peripheral membership never says inessential") {
  certify::Options o;
  o.methods = {Method::group};
  auto v = certify::certify_essential(fixtures::fig8(), o);
  for (const auto& e : v.edges) CHECK(e.essential != Answer::no);
  CHECK(certify::replay_group_certificates(v));
}

TEST_CASE("m136") {
  auto t = fixtures::m136();
  auto ess = certify::certify_essential(t);
  CHECK(ess.essential == Answer::yes);
  CHECK(ess.global == Tag::semi_angle);
  for (const auto& e : ess.edges) CHECK(e.tag == Tag::semi_angle);

  certify::Options o;
  o.shapes = m136_shapes();
  o.all_sources = true;
  auto v = certify::certify_strongly_essential(t, o);
  CHECK(v.strongly_essential == Answer::yes);
  CHECK(v.global == Tag::semi_angle);
  CHECK(v.pairs.size() == 21);
  check_consistent(v);
  for (const auto& p : v.pairs) {
    CHECK(p.parallel == Answer::no);
    // shared developed endpoints never count as a certificate
    bool geo_candidate = false;
    for (const auto& s : p.sources)
      if (s.tag == Tag::geometric_endpoints && s.answer == Answer::unknown && s.detail.find("share") != std::string::npos)
        geo_candidate = true;
    const bool expected = (p.first == 2 && (p.second == 5 || p.second == 6)) || (p.first == 3 && p.second == 4) ||
                          (p.first == 5 && p.second == 6);
    CHECK(geo_candidate == expected);
  }
  // edge words run from the single cusp back to itself
  auto ctx = certify::build_ideal_context(t);
  CHECK(ctx.peripheral.size() == 1);
  for (const auto& e : ctx.edges) CHECK(e.from == e.to);
}

TEST_CASE("pillow outputs are not strongly essential") {
  auto t = fixtures::m136();
  std::size_t checked = 0;
  for (std::size_t e = 0; e < 7 && checked < 4; ++e)
    for (auto site : moves::pillow_sites(t, e)) {
      auto r = moves::pillow_0_2(t, e, site);
      const auto& ce = r.record.created_edges;
      REQUIRE(ce.size() == 3);
      auto pairs = certify::pillow_parallel_pairs(r.tri);
      const std::pair<std::size_t, std::size_t> halves{std::min(ce[1], ce[2]), std::max(ce[1], ce[2])};
      CHECK(std::find(pairs.begin(), pairs.end(), halves) != pairs.end());

      auto v = certify::certify_strongly_essential(r.tri);
      CHECK(v.strongly_essential == Answer::no);
      bool witnessed = false;
      for (const auto& p : v.pairs)
        if (p.parallel == Answer::yes && p.tag == Tag::pillow_homotopy) witnessed = true;
      CHECK(witnessed);
      if (++checked == 4) break;
    }
  CHECK(checked == 4);
}

TEST_CASE("pillow witness agrees with the group") {
  auto t = fixtures::m136();
  auto r = moves::pillow_0_2(t, 0, moves::pillow_sites(t, 0).front());
  auto ctx = certify::build_ideal_context(r.tri);
  const auto& ce = r.record.created_edges;
  const auto& g = ctx.edges[ce[1]];
  const auto& d = ctx.edges[ce[2]];
  auto simp = pi1::simplify_presentation(ctx.spine.pres);
  bool found = false;
  for (bool flipd : {false, true}) {
    if (flipd ? !(g.from == d.to && g.to == d.from) : !(g.from == d.from && g.to == d.to)) continue;
    auto dw = flipd ? pi1::inverse(d.word) : d.word;
    auto di = pi1::inverse(dw);
    std::vector<pi1::Word> h1, h2;
    for (const auto& p : ctx.peripheral_gens(g.from))
      h2.push_back(pi1::map_word(simp, pi1::concat(pi1::concat(di, p), dw)));
    for (const auto& p : ctx.peripheral_gens(g.to)) h1.push_back(pi1::map_word(simp, p));
    auto w = pi1::map_word(simp, pi1::concat(di, g.word));
    pi1::Budget b;
    b.quotient_degree = 3;
    b.coset_nodes = 2000;
    auto verdict = pi1::decide_double_coset(simp.pres, h1, h2, w, b);
    if (verdict.answer == Answer::yes) {
      CHECK(pi1::replay_double_coset(simp.pres, h1, h2, w, verdict));
      found = true;
    }
    CHECK(verdict.answer != Answer::no);
  }
  CHECK(found);
}

TEST_CASE("quaternionic space by group certificates") {
  certify::Options o;
  o.methods = {Method::group};
  auto v = certify::certify_essential(fixtures::quaternionic(), o);
  CHECK_FALSE(v.ideal);
  CHECK(v.essential == Answer::yes);
  REQUIRE(v.edges.size() == 3);
  for (const auto& e : v.edges) {
    CHECK(e.essential == Answer::yes);
    CHECK(e.tag == Tag::group_word);
  }
  CHECK(certify::replay_group_certificates(v));

  certify::Options all;
  all.all_sources = true;
  auto s = certify::certify_strongly_essential(fixtures::quaternionic(), all);
  check_consistent(s);
  CHECK(s.pairs.size() == 3);
  MESSAGE("quaternionic strongly essential: " << pi1::to_string(s.strongly_essential));
}

TEST_CASE("closed pair test matches an independent Q8 computation") {
  // Each edge generator is a nontrivial element of Q8; a pair is parallel
  // exactly when the elements agree up to inversion.
  auto t = fixtures::quaternionic();
  auto p = pi1::presentation_closed(t);
  auto tab = pi1::todd_coxeter(p, {}, 1000);
  REQUIRE(tab.has_value());
  CHECK(tab->size() == 8);
  certify::Options o;
  o.methods = {Method::group};
  auto v = certify::certify_strongly_essential(t, o);
  for (const auto& pr : v.pairs) {
    const std::size_t ga = tab->act(0, {pi1::letter(pr.first)});
    const std::size_t gb = tab->act(0, {pi1::letter(pr.second)});
    const std::size_t gbi = tab->act(0, {pi1::letter(pr.second, true)});
    const bool same = ga == gb || ga == gbi;
    CHECK(pr.parallel == (same ? Answer::yes : Answer::no));
  }
}

TEST_CASE("unsupported inputs are rejected") {
  // a closed triangulation with more than one vertex
  std::mt19937 rng(11);
  std::optional<tri::Triangulation> multi;
  for (int i = 0; i < 5000 && !multi; ++i) {
    auto t = fixtures::random_closed(rng, 2, true);
    auto sk = tri::build_skeleton(t);
    if (sk.vertex_count() > 1 && sk.all_edges_valid() &&
        std::all_of(sk.vertices.begin(), sk.vertices.end(),
                    [](const tri::VertexLink& l) { return l.kind == tri::SurfaceKind::sphere; }))
      multi = t;
  }
  REQUIRE(multi.has_value());
  CHECK_THROWS_AS(certify::certify_essential(*multi), certify::CertifyError);

  tri::Triangulation open(1);
  CHECK_THROWS_AS(certify::certify_essential(open), certify::CertifyError);
}

TEST_CASE("verdict JSON") {
  auto v = certify::certify_strongly_essential(fixtures::fig8());
  auto j = nlohmann::json::parse(certify::verdict_json(v));
  CHECK(j["strongly_essential"] == "yes");
  CHECK(j["global_certificate"] == "strict_angle");
  CHECK(j["edges"].size() == 2);
  CHECK(j["edges"][0]["certificate"]["tag"] == "strict_angle");
  CHECK(certify::verdict_text(v, true).rfind("yes (certificate: strict_angle)", 0) == 0);
}
