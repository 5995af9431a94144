#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace esstri::tri {

/// A permutation of the tetrahedron vertex labels {0,1,2,3}.
///
/// Face gluings act on vertex labels: a gluing with permutation p sends
/// vertex v of the source tetrahedron to vertex p[v] of the target.
class Perm4 {
 public:
  constexpr Perm4() : images_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d)
      : images_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

  /// Returns nullopt unless the four images form a bijection of {0,1,2,3}.
  static std::optional<Perm4> from_images(std::span<const int> images);

  constexpr int operator[](int v) const { return images_[static_cast<std::size_t>(v)]; }

  /// Composition: (p * q)[v] == p[q[v]].
  constexpr Perm4 operator*(const Perm4& q) const {
    return Perm4((*this)[q[0]], (*this)[q[1]], (*this)[q[2]], (*this)[q[3]]);
  }

  constexpr Perm4 inverse() const {
    std::array<int, 4> inv{};
    for (int v = 0; v < 4; ++v) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(v)])] = v;
    return Perm4(inv[0], inv[1], inv[2], inv[3]);
  }

  /// +1 for even permutations, -1 for odd.
  int sign() const;

  /// Transposition swapping a and b.
  static Perm4 swap(int a, int b);

  /// All 24 permutations in lexicographic order of their image strings.
  static const std::array<Perm4, 24>& all();

  std::array<int, 4> images() const {
    return {images_[0], images_[1], images_[2], images_[3]};
  }
  std::string str() const;

  friend constexpr bool operator==(const Perm4&, const Perm4&) = default;
  friend constexpr auto operator<=>(const Perm4&, const Perm4&) = default;

 private:
  std::array<std::uint8_t, 4> images_;
};

}  // namespace esstri::tri
