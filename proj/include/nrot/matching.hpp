#pragma once

#include <cstddef>
#include <vector>

namespace nrot {

struct Assignment {
  std::vector<long> row_to_col;  // -1 when the row is left unmatched
  double total = 0.0;
};

/// Maximum-weight one-to-one assignment on a rows x cols matrix (either side
/// may be larger). Hungarian method on the square padding, O(n^3).
/// Throws std::invalid_argument on ragged input.
Assignment max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace nrot
