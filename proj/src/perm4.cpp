#include "esstri/perm4.hpp"

#include <algorithm>

namespace esstri::tri {

std::optional<Perm4> Perm4::from_images(std::span<const int> images) {
  if (images.size() != 4) return std::nullopt;
  std::array<bool, 4> seen{};
  for (int v : images) {
    if (v < 0 || v > 3 || seen[static_cast<std::size_t>(v)]) return std::nullopt;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return Perm4(images[0], images[1], images[2], images[3]);
}

int Perm4::sign() const {
  int inversions = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((*this)[i] > (*this)[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

Perm4 Perm4::swap(int a, int b) {
  std::array<int, 4> img{0, 1, 2, 3};
  std::swap(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]);
  return Perm4(img[0], img[1], img[2], img[3]);
}

const std::array<Perm4, 24>& Perm4::all() {
  static const std::array<Perm4, 24> perms = [] {
    std::array<Perm4, 24> out{};
    std::array<int, 4> img{0, 1, 2, 3};
    std::size_t k = 0;
    do {
      out[k++] = Perm4(img[0], img[1], img[2], img[3]);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
  }();
  return perms;
}

std::string Perm4::str() const {
  std::string s;
  for (int v = 0; v < 4; ++v) s.push_back(static_cast<char>('0' + (*this)[v]));
  return s;
}

}  // namespace esstri::tri
