#pragma once

#include <vector>

#include <gmpxx.h>

namespace esstri::lp {

using Vec = std::vector<mpq_class>;
using Mat = std::vector<Vec>;

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  Vec x;
  mpq_class value;
};

/// Maximizes c.x subject to A x = b, x >= 0 with exact two-phase simplex
/// and Bland's rule.  Redundant equality rows are tolerated.
Result maximize(const Mat& A, const Vec& b, const Vec& c);

}  // namespace esstri::lp
