#include "fpn/index_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace fpn {

void IndexSet::insert(int i, int j) {
  if (i == j) throw std::invalid_argument("IndexSet: diagonal pairs are not allowed");
  if (i < 0 || j < 0) throw std::invalid_argument("IndexSet: negative index");
  pairs_.emplace(std::min(i, j), std::max(i, j));
}

bool IndexSet::contains(int i, int j) const {
  if (i == j) return false;
  return pairs_.count({std::min(i, j), std::max(i, j)}) > 0;
}

int IndexSet::max_index() const {
  int m = -1;
  for (const auto& [i, j] : pairs_) m = std::max(m, j);
  return m;
}

BoolMask IndexSet::to_mask(int p) const {
  if (max_index() >= p)
    throw std::invalid_argument("IndexSet: index out of range for dimension " + std::to_string(p));
  BoolMask m = BoolMask::Constant(p, p, false);
  for (const auto& [i, j] : pairs_) {
    m(i, j) = true;
    m(j, i) = true;
  }
  return m;
}

IndexSet IndexSet::from_mask(const BoolMask& m) {
  IndexSet s;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j)) s.insert(static_cast<int>(i), static_cast<int>(j));
  return s;
}

IndexSet IndexSet::support_of(const Mat& x, double threshold) {
  IndexSet s;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (std::abs(x(i, j)) > threshold) s.insert(static_cast<int>(i), static_cast<int>(j));
  return s;
}

}  // namespace fpn
