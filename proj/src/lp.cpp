#include "esstri/lp.hpp"

#include <optional>
#include <stdexcept>

namespace esstri::lp {

namespace {

struct Tableau {
  // rows[i] = coefficients over `cols` columns followed by the rhs.
  Mat rows;
  std::vector<std::size_t> basis;
  std::size_t cols = 0;

  void pivot(std::size_t r, std::size_t c) {
    const mpq_class p = rows[r][c];
    for (auto& x : rows[r]) x /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const mpq_class f = rows[i][c];
      for (std::size_t j = 0; j <= cols; ++j)
        if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
    }
    basis[r] = c;
  }

  // Maximizes obj over columns flagged in `allowed`.  Returns false when
  // unbounded.
  bool run(const Vec& obj, const std::vector<bool>& allowed) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols && !enter; ++j) {
        if (!allowed[j]) continue;
        mpq_class reduced = obj[j];
        for (std::size_t i = 0; i < rows.size(); ++i) reduced -= obj[basis[i]] * rows[i][j];
        if (reduced > 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      mpq_class best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][*enter] <= 0) continue;
        mpq_class ratio = rows[i][cols] / rows[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }
};

}  // namespace

Result maximize(const Mat& A, const Vec& b, const Vec& c) {
  const std::size_t m = A.size(), n = c.size();
  Tableau t;
  t.cols = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("lp: row length mismatch");
    Vec row(n + m + 1, 0);
    const int sign = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) row[j] = sign * A[i][j];
    row[n + i] = 1;
    row[n + m] = sign * b[i];
    t.rows.push_back(std::move(row));
    t.basis.push_back(n + i);
  }
  Vec phase1(n + m, 0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  std::vector<bool> all(n + m, true);
  t.run(phase1, all);
  mpq_class infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] >= n) infeas += t.rows[i][n + m];
  Result res;
  if (infeas != 0) return res;

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and dropped.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j)
      if (t.rows[i][j] != 0) col = j;
    if (col) {
      t.pivot(i, *col);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<long>(i));
      t.basis.erase(t.basis.begin() + static_cast<long>(i));
    }
  }
  Vec obj(n + m, 0);
  for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
  std::vector<bool> real(n + m, false);
  for (std::size_t j = 0; j < n; ++j) real[j] = true;
  if (!t.run(obj, real)) {
    res.status = Status::unbounded;
    return res;
  }
  res.status = Status::optimal;
  res.x.assign(n, 0);
  for (std::size_t i = 0; i < t.rows.size(); ++i) res.x[t.basis[i]] = t.rows[i][n + m];
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace esstri::lp
