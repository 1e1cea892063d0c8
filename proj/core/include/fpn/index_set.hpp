#pragma once

#include "fpn/linalg.hpp"

#include <set>
#include <utility>
#include <vector>

namespace fpn {

/// Symmetric set of off-diagonal index pairs. Pairs are stored 0-based with
/// the canonical orientation i < j; (i, j) and (j, i) are the same element.
/// File formats use 1-based indices, converted at the I/O boundary.
class IndexSet {
 public:
  IndexSet() = default;

  /// Inserts the unordered pair {i, j}. Throws on diagonal or negative
  /// indices.
  void insert(int i, int j);

  bool contains(int i, int j) const;
  bool empty() const { return pairs_.empty(); }

  /// Number of unordered pairs.
  std::size_t edge_count() const { return pairs_.size(); }

  /// Number of ordered pairs, i.e. 2 * edge_count().
  std::size_t ordered_count() const { return 2 * pairs_.size(); }

  /// Canonical pairs (i < j), sorted.
  const std::set<std::pair<int, int>>& pairs() const { return pairs_; }

  /// Largest index referenced, or -1 when empty.
  int max_index() const;

  /// Dense symmetric boolean mask of size p x p, false on the diagonal.
  /// Throws if any index is out of range.
  BoolMask to_mask(int p) const;

  /// Off-diagonal true entries of a mask (symmetrized with logical-or).
  static IndexSet from_mask(const BoolMask& m);

  /// Off-diagonal support {(i, j) : |x_ij| > threshold}.
  static IndexSet support_of(const Mat& x, double threshold = 0.0);

  bool operator==(const IndexSet& other) const { return pairs_ == other.pairs_; }

 private:
  std::set<std::pair<int, int>> pairs_;
};

}  // namespace fpn
