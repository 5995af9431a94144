#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "esstri/pi1.hpp"

namespace esstri::pi1 {

struct Budget {
  /// Coset limit for Todd-Coxeter.
  std::size_t coset_nodes = 50000;
  /// Largest permutation degree tried by the quotient search.
  std::size_t quotient_degree = 6;
  /// Search-tree nodes allowed per quotient search.
  std::size_t quotient_nodes = 200000;
  /// Search expansions per rewriting attempt.
  std::size_t rewrite_steps = 4000;
  /// Longest product of subgroup generators tried literally.
  std::size_t literal_depth = 3;
};

/// Parses "key=value,..." over the Budget field names, starting from base.
Budget parse_budget(const std::string& spec, Budget base = {});
std::string format_budget(const Budget& b);

// ------------------------------------------------------------ rewriting

/// Conjugate by rotating the (cyclic) word left by `rotate`, then replace
/// its prefix of length `length`, a prefix of the relator variant
/// (relator, inverted, offset), by the inverse of the variant's rest.
struct RewriteStep {
  std::size_t rotate = 0;
  std::size_t relator = 0;
  bool inverted = false;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct RewriteTrace {
  Word start;
  std::vector<RewriteStep> steps;
};

/// Applies one step to a cyclically reduced word; nullopt if the step does
/// not match.
std::optional<Word> apply_step(const Presentation& p, const Word& w, const RewriteStep& s);
/// Greedy Dehn shortening, then a best-first search over relator
/// substitutions with at most max_steps expansions.  Returns the trace
/// when the word reaches 1.
std::optional<RewriteTrace> rewrite_to_identity(const Presentation& p, const Word& w, std::size_t max_steps);
bool replay_rewrite(const Presentation& p, const Word& w, const RewriteTrace& t);

// ------------------------------------------------------------ coset tables

/// Column 2g is generator g, column 2g+1 its inverse; -1 = undefined.
struct CosetTable {
  std::size_t generators = 0;
  std::vector<std::vector<int>> rows;
  std::size_t size() const { return rows.size(); }
  int act(int coset, const Word& w) const;
};

/// HLT enumeration of the cosets of <subgroup>; nullopt when the coset
/// limit is reached first.
std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup,
                                       std::size_t max_cosets);

/// Complete, inverse-consistent, every relator closes at every coset and
/// every subgroup generator fixes coset 0.
bool verify_coset_table(const Presentation& p, const std::vector<Word>& subgroup, const CosetTable& t);

// ------------------------------------------------------------ quotients

using Permutation = std::vector<int>;

/// Homomorphism to a symmetric group, given by generator images.
struct PermRep {
  std::size_t degree = 0;
  std::vector<Permutation> images;
  Permutation eval(const Word& w) const;
};

bool is_identity(const Permutation& p);
bool verify_rep(const Presentation& p, const PermRep& r);

/// Elements of the subgroup generated by the images of the words.
std::vector<Permutation> generated_subgroup(const PermRep& r, const std::vector<Word>& gens);

/// Transitive permutation representations of degree 2..max_degree, in a
/// fixed search order; returns the first accepted by `want`.
std::optional<PermRep> find_quotient(const Presentation& p, const std::function<bool(const PermRep&)>& want,
                                     std::size_t max_degree, std::size_t max_nodes);

// ------------------------------------------------------------ verdicts

enum class Answer { yes, no, unknown };
enum class CertKind { abelianization, rewriting, coset_table, finite_quotient, literal, budget_exhausted };

std::string to_string(Answer a);
std::string to_string(CertKind k);

struct Certificate {
  CertKind kind = CertKind::budget_exhausted;
  std::vector<mpz_class> image;
  RewriteTrace trace;
  CosetTable table;
  PermRep rep;
  /// Literal factorizations: words in the subgroup generators, as letters
  /// indexing the generator lists (+(i+1) / -(i+1)).
  Word factor1, factor2;
};

struct GroupVerdict {
  Answer answer = Answer::unknown;
  Certificate certificate;
  /// Pipeline stages tried, in order.
  std::vector<std::string> log;
};

/// Is w nontrivial?  yes = nontrivial.
GroupVerdict decide_word(const Presentation& p, const Word& w, const Budget& b = {});
/// Is w in <subgroup>?
GroupVerdict decide_membership(const Presentation& p, const std::vector<Word>& subgroup, const Word& w,
                               const Budget& b = {});
/// Is w in H2 * H1?
GroupVerdict decide_double_coset(const Presentation& p, const std::vector<Word>& h1, const std::vector<Word>& h2,
                                 const Word& w, const Budget& b = {});

bool replay_word(const Presentation& p, const Word& w, const GroupVerdict& v);
bool replay_membership(const Presentation& p, const std::vector<Word>& subgroup, const Word& w,
                       const GroupVerdict& v);
bool replay_double_coset(const Presentation& p, const std::vector<Word>& h1, const std::vector<Word>& h2,
                         const Word& w, const GroupVerdict& v);

/// Product of subgroup generators described by a factor word.
Word expand_factor(const std::vector<Word>& gens, const Word& factor);

std::string verdict_json(const GroupVerdict& v);
GroupVerdict verdict_from_json(const std::string& text);

}  // namespace esstri::pi1
