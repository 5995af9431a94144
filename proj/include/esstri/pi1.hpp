#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "esstri/skeleton.hpp"
#include "esstri/triangulation.hpp"

namespace esstri::pi1 {

/// Letters are +(g+1) for generator g and -(g+1) for its inverse.
using Word = std::vector<int>;

inline int letter(std::size_t g, bool inverse = false) {
  int x = static_cast<int>(g) + 1;
  return inverse ? -x : x;
}
inline std::size_t gen_of(int l) { return static_cast<std::size_t>((l < 0 ? -l : l) - 1); }

Word reduce(Word w);
Word inverse(const Word& w);
Word cyclic_reduce(Word w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, long k);
/// Generators 0..25 print as a..z (inverse A..Z), others as x<g> / X<g>.
std::string format_word(const Word& w);
Word parse_word(const std::string& s);

class Pi1Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Presentation {
  std::size_t generators = 0;
  std::vector<Word> relators;
  /// Optional description of what each generator stands for.
  std::vector<std::string> labels;
};

std::string format_presentation(const Presentation& p);

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// U * M * V = D with D diagonal, d_0 | d_1 | ... ; Vinv = V^-1.
struct Smith {
  std::size_t rows = 0, cols = 0;
  /// Nonzero diagonal entries d_0..d_{rank-1}, all positive.
  std::vector<mpz_class> diag;
  IntMatrix U, V, Vinv;
  std::size_t rank() const { return diag.size(); }
};

Smith smith_normal_form(const IntMatrix& m);

/// Exponent-sum matrix: one row per relator, one column per generator.
IntMatrix relator_matrix(const Presentation& p);
std::vector<mpz_class> exponent_vector(const Word& w, std::size_t generators);

/// Abelian invariants: torsion coefficients > 1 in increasing divisibility
/// order followed by one 0 per free summand.
std::vector<mpz_class> homology(const Presentation& p);
std::string format_invariants(const std::vector<mpz_class>& inv);

/// Image of w in the abelianization, in Smith coordinates: torsion
/// coordinates reduced modulo their invariant, free coordinates unreduced.
/// Coordinates with invariant 1 are dropped.
std::vector<mpz_class> word_image(const Presentation& p, const Word& w);
bool is_zero(const std::vector<mpz_class>& v);

/// True when v lies in the integer row space of m.
bool in_row_space(const IntMatrix& m, const std::vector<mpz_class>& v);

/// Generators are edge classes, oriented by their first corner; one
/// relator per face class.  Requires a closed triangulation with one vertex.
Presentation presentation_closed(const tri::Triangulation& t);

/// Dual-spine presentation with spanning-tree generators collapsed.
struct SpinePresentation {
  Presentation pres;
  /// Face class -> generator, nullopt for dual-tree faces.
  std::vector<std::optional<std::size_t>> generator_of_face;
  std::vector<std::size_t> face_of_generator;
  /// Raw relators before tree collapse, letters in face classes.
  std::vector<Word> face_relators;
};

SpinePresentation presentation_spine(const tri::Triangulation& t);
SpinePresentation presentation_spine(const tri::Triangulation& t, const tri::Skeleton& sk);

/// Letter (in face-class numbering) for leaving tet through face f, or
/// the spine generator letter when collapsed; nullopt for tree faces.
int face_crossing(const tri::Skeleton& sk, std::size_t tet, int face);
std::optional<int> spine_crossing(const SpinePresentation& sp, const tri::Skeleton& sk, std::size_t tet, int face);

/// A step of a path in a vertex link: at corner triangle (tet, vertex),
/// leave through face `face` of tet.
struct LinkStep {
  std::size_t tet = 0;
  int vertex = 0;
  int face = 0;
  friend bool operator==(const LinkStep&, const LinkStep&) = default;
};

struct PeripheralCurve {
  std::vector<LinkStep> path;
  Word word;
};

struct PeripheralSystem {
  std::size_t vertex = 0;
  /// Basepoint corner triangle: the least (tet, vertex) in the link.
  std::size_t base_tet = 0;
  int base_vertex = 0;
  std::vector<PeripheralCurve> curves;
  /// Tree paths in the link dual graph from the basepoint to each
  /// triangle, indexed like the link's triangle list.
  std::vector<std::vector<LinkStep>> tree_paths;
};

/// Two curves generating the first homology of a torus link.
PeripheralSystem peripheral_words(const tri::Triangulation& t, std::size_t vertex);
PeripheralSystem peripheral_words(const tri::Triangulation& t, const tri::Skeleton& sk, const SpinePresentation& sp,
                                  std::size_t vertex);

/// Word read along a link path.
Word path_word(const SpinePresentation& sp, const tri::Skeleton& sk, const std::vector<LinkStep>& path);
/// Link triangle reached by following a path from its first triangle.
std::pair<std::size_t, int> path_end(const tri::Triangulation& t, const std::vector<LinkStep>& path);
std::vector<LinkStep> reverse_path(const tri::Triangulation& t, const std::vector<LinkStep>& path);

struct SimplifyOptions {
  /// Total relator length is never allowed beyond this.
  std::size_t max_total_length = 4000;
  /// Substitutions using a relator longer than 2 are accepted when the
  /// total length grows by at most this factor.
  double growth = 1.5;
};

struct Simplified {
  Presentation pres;
  /// Original generator -> word in the new generators.
  std::vector<Word> image;
};

Simplified simplify_presentation(const Presentation& p, const SimplifyOptions& opt = {});
Word map_word(const Simplified& s, const Word& w);

}  // namespace esstri::pi1
