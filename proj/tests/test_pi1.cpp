#include <doctest.h>

#include <map>
#include <numeric>
#include <random>

#include "esstri/group.hpp"
#include "esstri/pi1.hpp"
#include "fixtures.hpp"

using namespace esstri;
using namespace esstri::pi1;

namespace {

Presentation pres(std::size_t gens, const std::vector<std::string>& rels) {
  Presentation p;
  p.generators = gens;
  for (const auto& r : rels) p.relators.push_back(parse_word(r));
  return p;
}

// Naive integer diagonalization on long long; sorted invariants in the
// same convention as homology(): torsion > 1 then one 0 per free summand.
std::vector<long long> naive_invariants(std::vector<std::vector<long long>> m, std::size_t cols) {
  std::vector<long long> diag;
  std::size_t r0 = 0;
  for (std::size_t c0 = 0; c0 < cols && r0 < m.size(); ++c0) {
    for (;;) {
      // smallest nonzero in the remaining block
      long long best = 0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = r0; i < m.size(); ++i)
        for (std::size_t j = c0; j < cols; ++j)
          if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < best)) {
            best = std::llabs(m[i][j]);
            bi = i;
            bj = j;
          }
      if (best == 0) goto done;
      std::swap(m[r0], m[bi]);
      for (auto& row : m) std::swap(row[c0], row[bj]);
      bool clean = true;
      for (std::size_t i = r0 + 1; i < m.size(); ++i) {
        long long q = m[i][c0] / m[r0][c0];
        for (std::size_t j = c0; j < cols; ++j) m[i][j] -= q * m[r0][j];
        if (m[i][c0] != 0) clean = false;
      }
      for (std::size_t j = c0 + 1; j < cols; ++j) {
        long long q = m[r0][j] / m[r0][c0];
        for (std::size_t i = r0; i < m.size(); ++i) m[i][j] -= q * m[i][c0];
        if (m[r0][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = r0 + 1; i < m.size() && divides; ++i)
        for (std::size_t j = c0 + 1; j < cols; ++j)
          if (m[i][j] % m[r0][c0] != 0) {
            for (std::size_t k = c0; k < cols; ++k) m[r0][k] += m[i][k];
            divides = false;
            break;
          }
      if (!divides) continue;
      diag.push_back(std::llabs(m[r0][c0]));
      ++r0;
      break;
    }
  }
done:
  std::vector<long long> out;
  for (long long d : diag)
    if (d > 1) out.push_back(d);
  for (std::size_t i = diag.size(); i < cols; ++i) out.push_back(0);
  return out;
}

// H1 of a closed one-vertex triangulation straight from the gluings:
// oriented edges are identified across faces, then each face contributes
// its boundary cycle.  Shares no code with the presentation builders.
std::vector<long long> chain_complex_h1(const tri::Triangulation& t) {
  const std::size_t n = t.size();
  auto node = [](std::size_t tet, int a, int b) { return tet * 16 + static_cast<std::size_t>(a * 4 + b); };
  std::vector<std::size_t> parent(n * 16);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t tet = 0; tet < n; ++tet)
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(tet, f);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != b && a != f && b != f) parent[find(node(tet, a, b))] = find(node(g->tet, g->perm[a], g->perm[b]));
    }
  std::map<std::size_t, std::pair<std::size_t, int>> edge;  // root -> (index, sign)
  std::size_t count = 0;
  for (std::size_t tet = 0; tet < n; ++tet)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        std::size_t r = find(node(tet, a, b)), s = find(node(tet, b, a));
        if (edge.count(r)) continue;
        edge[r] = {count, 1};
        edge[s] = {count, -1};
        ++count;
      }
  std::vector<std::vector<long long>> rows;
  for (std::size_t tet = 0; tet < n; ++tet)
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(tet, f);
      if (std::make_pair(g->tet, g->perm[f]) < std::make_pair(tet, f)) continue;
      std::vector<int> v;
      for (int x = 0; x < 4; ++x)
        if (x != f) v.push_back(x);
      std::vector<long long> row(count, 0);
      for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[1], v[2]}, std::pair{v[2], v[0]}}) {
        auto [e, s] = edge.at(find(node(tet, a, b)));
        row[e] += s;
      }
      rows.push_back(row);
    }
  return naive_invariants(rows, count);
}

std::vector<long long> as_ll(const std::vector<mpz_class>& v) {
  std::vector<long long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

void check_replay_word(const Presentation& p, const Word& w, const GroupVerdict& v) {
  CHECK(replay_word(p, w, v));
  GroupVerdict back = verdict_from_json(verdict_json(v));
  CHECK(back.answer == v.answer);
  CHECK(replay_word(p, w, back));
}

Word random_word(std::mt19937& rng, std::size_t gens, std::size_t len) {
  std::uniform_int_distribution<int> g(0, static_cast<int>(gens) - 1), s(0, 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(letter(static_cast<std::size_t>(g(rng)), s(rng) == 1));
  return w;
}

}  // namespace

TEST_CASE("word utilities") {
  CHECK(reduce(parse_word("aAbBc")) == parse_word("c"));
  CHECK(cyclic_reduce(parse_word("aBcbA")) == parse_word("c"));
  CHECK(inverse(parse_word("abC")) == parse_word("cBA"));
  CHECK(power(parse_word("ab"), -2) == parse_word("BABA"));
  CHECK(format_word({}) == "1");
  Word big{letter(30), letter(2, true)};
  CHECK(parse_word(format_word(big)) == big);
}

TEST_CASE("homology of a relator matrix") {
  Presentation p = pres(2, {"aa"});
  CHECK(as_ll(homology(p)) == std::vector<long long>{2, 0});
  CHECK(is_zero(word_image(p, parse_word("aa"))));
  CHECK_FALSE(is_zero(word_image(p, parse_word("a"))));
  CHECK_FALSE(is_zero(word_image(p, parse_word("b"))));
}

TEST_CASE("quaternionic space presentation") {
  auto q = fixtures::quaternionic();
  Presentation p = presentation_closed(q);
  CHECK(p.generators == 3);
  CHECK(p.relators.size() == 4);
  CHECK(as_ll(homology(p)) == std::vector<long long>{2, 2});
  CHECK(chain_complex_h1(q) == std::vector<long long>{2, 2});
  CHECK(homology(presentation_spine(q).pres) == homology(p));
  CHECK_THROWS_AS(peripheral_words(q, 0), Pi1Error);
  CHECK_THROWS_AS(presentation_closed(fixtures::fig8()), Pi1Error);
}

TEST_CASE("closed one-vertex presentations match the chain complex") {
  std::mt19937 rng(11);
  int tested = 0;
  for (int trial = 0; trial < 5000 && tested < 40; ++trial) {
    auto t = fixtures::random_closed(rng, 2 + static_cast<std::size_t>(trial % 3), trial % 2 == 0);
    auto sk = tri::build_skeleton(t);
    bool valid = std::all_of(sk.edges.begin(), sk.edges.end(), [](const auto& e) { return e.valid; });
    if (sk.vertex_count() != 1 || !valid || sk.vertices[0].kind != tri::SurfaceKind::sphere) continue;
    ++tested;
    Presentation p = presentation_closed(t);
    CHECK(as_ll(homology(p)) == chain_complex_h1(t));
    CHECK(homology(presentation_spine(t, sk).pres) == homology(p));
    // flipping one generator changes nothing up to relabelling
    Presentation flipped = p;
    for (auto& r : flipped.relators)
      for (int& l : r)
        if (gen_of(l) == 0) l = -l;
    CHECK(homology(flipped) == homology(p));
  }
  CHECK(tested >= 10);
  MESSAGE("closed one-vertex samples: " << tested);
}

TEST_CASE("spine presentations of fig8 and m136") {
  auto f = presentation_spine(fixtures::fig8());
  CHECK(f.pres.generators == 3);
  CHECK(f.pres.relators.size() == 2);
  CHECK(as_ll(homology(f.pres)) == std::vector<long long>{0});
  auto m = presentation_spine(fixtures::m136());
  CHECK(m.pres.generators == 8);
  CHECK(m.pres.relators.size() == 7);
  CHECK(as_ll(homology(m.pres)).back() == 0);
}

TEST_CASE("simplification") {
  auto s = simplify_presentation(pres(2, {"ab", ""}));
  CHECK(s.pres.generators == 1);
  CHECK(s.pres.relators.empty());
  CHECK(s.image[1] == inverse(s.image[0]));

  auto f = presentation_spine(fixtures::fig8()).pres;
  auto sf = simplify_presentation(f);
  CHECK(sf.pres.generators <= 2);
  CHECK(homology(sf.pres) == homology(f));
  auto again = simplify_presentation(sf.pres);
  CHECK(again.pres.generators == sf.pres.generators);
  CHECK(again.pres.relators == sf.pres.relators);

  auto m = presentation_spine(fixtures::m136()).pres;
  auto sm = simplify_presentation(m);
  CHECK(sm.pres.generators < m.generators);
  CHECK(homology(sm.pres) == homology(m));
}

TEST_CASE("peripheral commutators are trivial") {
  for (auto t : {fixtures::fig8(), fixtures::m136()}) {
    auto sk = tri::build_skeleton(t);
    auto sp = presentation_spine(t, sk);
    for (std::size_t v = 0; v < sk.vertex_count(); ++v) {
      auto ps = peripheral_words(t, sk, sp, v);
      REQUIRE(ps.curves.size() == 2);
      const Word& x = ps.curves[0].word;
      const Word& y = ps.curves[1].word;
      CHECK_FALSE(reduce(x).empty());
      CHECK_FALSE(reduce(y).empty());
      Word c = concat(concat(x, y), concat(inverse(x), inverse(y)));
      auto v1 = decide_word(sp.pres, c);
      CHECK(v1.answer == Answer::no);
      check_replay_word(sp.pres, c, v1);
    }
  }
}

TEST_CASE("decide_word on small examples") {
  Presentation p = pres(1, {"aa"});
  auto a = decide_word(p, parse_word("a"));
  CHECK(a.answer == Answer::yes);
  check_replay_word(p, parse_word("a"), a);
  auto aa = decide_word(p, parse_word("aa"));
  CHECK(aa.answer == Answer::no);
  CHECK(aa.certificate.kind == CertKind::rewriting);
  check_replay_word(p, parse_word("aa"), aa);

  // Quaternion group: abelianization kills nothing of order 4, so the
  // coset table is what settles a^2.
  Presentation q8 = pres(2, {"aaBB", "abaB"});
  auto a2 = decide_word(q8, parse_word("aa"));
  CHECK(a2.answer == Answer::yes);
  check_replay_word(q8, parse_word("aa"), a2);
  auto a4 = decide_word(q8, parse_word("aaaa"));
  CHECK(a4.answer == Answer::no);
  check_replay_word(q8, parse_word("aaaa"), a4);
}

TEST_CASE("quaternionic space edge generators are nontrivial") {
  Presentation p = presentation_closed(fixtures::quaternionic());
  auto t = todd_coxeter(p, {}, 1000);
  REQUIRE(t.has_value());
  CHECK(t->size() == 8);
  CHECK(verify_coset_table(p, {}, *t));
  for (std::size_t g = 0; g < 3; ++g) {
    Word w{letter(g)};
    CHECK(t->act(0, w) != 0);
    auto v = decide_word(p, w);
    CHECK(v.answer == Answer::yes);
    check_replay_word(p, w, v);
    CHECK(decide_word(p, inverse(w)).answer == Answer::yes);
  }
}

TEST_CASE("todd-coxeter on known groups") {
  Presentation s3 = pres(2, {"aa", "bb", "ababab"});
  auto t = todd_coxeter(s3, {}, 100);
  REQUIRE(t.has_value());
  CHECK(t->size() == 6);
  auto h = todd_coxeter(s3, {parse_word("a")}, 100);
  REQUIRE(h.has_value());
  CHECK(h->size() == 3);
  CHECK(verify_coset_table(s3, {parse_word("a")}, *h));
  // Z5 written redundantly
  auto z5 = todd_coxeter(pres(2, {"aaaaa", "aB"}), {}, 100);
  REQUIRE(z5.has_value());
  CHECK(z5->size() == 5);
  // infinite: limit reached
  CHECK_FALSE(todd_coxeter(pres(2, {"abAB"}), {}, 500).has_value());
  // a tampered table is rejected
  CosetTable bad = *t;
  std::swap(bad.rows[1], bad.rows[2]);
  CHECK_FALSE(verify_coset_table(s3, {}, bad));
}

TEST_CASE("quotient search") {
  Presentation free2 = pres(2, {});
  auto q = find_quotient(
      free2, [](const PermRep& r) { return r.degree == 3 && generated_subgroup(r, {{1}, {2}}).size() == 6; }, 6,
      100000);
  REQUIRE(q.has_value());
  CHECK(verify_rep(free2, *q));
  // trivial group has no nontrivial quotient
  Presentation triv = pres(2, {"a", "b"});
  CHECK_FALSE(find_quotient(triv, [](const PermRep&) { return true; }, 5, 100000).has_value());
  // every representation found satisfies the relators
  Presentation s3 = pres(2, {"aa", "bbb", "abab"});
  int found = 0;
  find_quotient(
      s3,
      [&](const PermRep& r) {
        CHECK(verify_rep(s3, r));
        ++found;
        return false;
      },
      6, 100000);
  CHECK(found > 0);
}

TEST_CASE("decide_membership examples") {
  Presentation free2 = pres(2, {});
  auto yes = decide_membership(free2, {parse_word("a")}, parse_word("aaa"));
  CHECK(yes.answer == Answer::yes);
  CHECK(replay_membership(free2, {parse_word("a")}, parse_word("aaa"), yes));
  auto no = decide_membership(free2, {parse_word("a")}, parse_word("b"));
  CHECK(no.answer == Answer::no);
  CHECK(no.certificate.kind == CertKind::abelianization);
  CHECK(replay_membership(free2, {parse_word("a")}, parse_word("b"), no));
  // same abelian image, separated by a quotient
  auto sep = decide_membership(free2, {parse_word("a"), parse_word("b")}, parse_word("ab"));
  CHECK(sep.answer == Answer::yes);
  auto conj = decide_membership(free2, {parse_word("a")}, parse_word("bab" "A" "B" "A" "a"));
  CHECK(conj.answer != Answer::yes);

  auto t = fixtures::fig8();
  auto sk = tri::build_skeleton(t);
  auto sp = presentation_spine(t, sk);
  auto ps = peripheral_words(t, sk, sp, 0);
  std::vector<Word> h{ps.curves[0].word, ps.curves[1].word};
  for (std::size_t g = 0; g < sp.pres.generators; ++g) {
    Word w{letter(g)};
    if (is_zero(word_image(sp.pres, w))) continue;
    Budget b;
    b.quotient_degree = 5;
    auto v = decide_membership(sp.pres, h, w, b);
    CHECK(v.answer != Answer::yes);
    CHECK(replay_membership(sp.pres, h, w, v));
    CHECK(replay_membership(sp.pres, h, w, verdict_from_json(verdict_json(v))));
  }
}

TEST_CASE("decide_double_coset examples") {
  Presentation free2 = pres(2, {});
  const std::vector<Word> h1{parse_word("a")}, h2{parse_word("b")};
  auto ba = decide_double_coset(free2, h1, h2, parse_word("ba"));
  CHECK(ba.answer == Answer::yes);
  CHECK(ba.certificate.kind == CertKind::literal);
  CHECK(ba.certificate.factor1.size() + ba.certificate.factor2.size() == 2);
  CHECK(replay_double_coset(free2, h1, h2, parse_word("ba"), ba));

  auto aba = decide_double_coset(free2, h1, h2, parse_word("aba"));
  CHECK(aba.answer == Answer::no);
  CHECK(aba.certificate.kind == CertKind::finite_quotient);
  CHECK(replay_double_coset(free2, h1, h2, parse_word("aba"), aba));
  // oracle: the S3 quotient a -> (12), b -> (13) from the worked example
  PermRep s3;
  s3.degree = 3;
  s3.images = {{1, 0, 2}, {2, 1, 0}};
  auto prod = generated_subgroup(s3, h2);
  auto right = generated_subgroup(s3, h1);
  CHECK(prod.size() * right.size() == 4);
  Certificate c;
  c.kind = CertKind::finite_quotient;
  c.rep = s3;
  GroupVerdict manual{Answer::no, c, {}};
  CHECK(replay_double_coset(free2, h1, h2, parse_word("aba"), manual));

  auto id = decide_double_coset(free2, h1, h2, {});
  CHECK(id.answer == Answer::yes);
  CHECK(id.certificate.factor1.empty());
  CHECK(id.certificate.factor2.empty());
  CHECK(replay_double_coset(free2, h1, h2, {}, id));

  // finite index H1: coset table settles it
  Presentation s3p = pres(2, {"aa", "bb", "ababab"});
  Budget b;
  b.literal_depth = 0;
  b.quotient_degree = 1;
  // <b><a> = {1, a, b, ba}; ab has order 3 and is not in it
  auto t = decide_double_coset(s3p, {parse_word("a")}, {parse_word("b")}, parse_word("ba"), b);
  CHECK(t.answer == Answer::yes);
  CHECK(t.certificate.kind == CertKind::coset_table);
  CHECK(replay_double_coset(s3p, {parse_word("a")}, {parse_word("b")}, parse_word("ba"), t));
  auto t1 = decide_double_coset(s3p, {parse_word("a")}, {parse_word("b")}, parse_word("ab"), b);
  CHECK(t1.answer == Answer::no);
  CHECK(replay_double_coset(s3p, {parse_word("a")}, {parse_word("b")}, parse_word("ab"), t1));
  auto t2 = decide_double_coset(s3p, {parse_word("a")}, {parse_word("a")}, parse_word("b"), b);
  CHECK(t2.answer == Answer::no);
  CHECK(replay_double_coset(s3p, {parse_word("a")}, {parse_word("a")}, parse_word("b"), t2));
}

TEST_CASE("verdicts agree for w and its inverse and replay") {
  std::mt19937 rng(5);
  std::vector<Presentation> groups{presentation_closed(fixtures::quaternionic()),
                                   simplify_presentation(presentation_spine(fixtures::fig8()).pres).pres,
                                   pres(2, {"aa", "bb", "ababab"})};
  Budget b;
  b.quotient_degree = 4;
  b.coset_nodes = 2000;
  for (const auto& p : groups)
    for (int i = 0; i < 25; ++i) {
      Word w = random_word(rng, p.generators, 1 + static_cast<std::size_t>(i % 7));
      auto v = decide_word(p, w, b);
      auto vi = decide_word(p, inverse(w), b);
      CHECK(v.answer == vi.answer);
      check_replay_word(p, w, v);
      check_replay_word(p, inverse(w), vi);
    }
}

TEST_CASE("tampered certificates fail replay") {
  Presentation p = pres(1, {"aa"});
  auto v = decide_word(p, parse_word("aa"));
  REQUIRE(v.certificate.kind == CertKind::rewriting);
  CHECK_FALSE(replay_word(p, parse_word("a"), v));
  GroupVerdict flipped = v;
  flipped.answer = Answer::yes;
  CHECK_FALSE(replay_word(p, parse_word("aa"), flipped));
  Certificate c;
  c.kind = CertKind::finite_quotient;
  c.rep.degree = 3;
  c.rep.images = {{1, 2, 0}};
  CHECK_FALSE(replay_word(p, parse_word("a"), GroupVerdict{Answer::yes, c, {}}));
}

TEST_CASE("budget strings") {
  Budget b = parse_budget("coset_nodes=10,quotient_degree=3");
  CHECK(b.coset_nodes == 10);
  CHECK(b.quotient_degree == 3);
  CHECK(b.literal_depth == Budget{}.literal_depth);
  CHECK(parse_budget(format_budget(b)).quotient_nodes == b.quotient_nodes);
  CHECK_THROWS(parse_budget("bogus=1"));
  CHECK_THROWS(parse_budget("coset_nodes"));
}
