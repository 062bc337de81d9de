#ifndef SWARMPATROL_MATCHING_HPP_
#define SWARMPATROL_MATCHING_HPP_

#include <cstdint>
#include <utility>
#include <vector>

namespace swarmpatrol {

// Exact minimum-weight perfect matching on a complete graph given a dense
// symmetric weight matrix (weights[i][j], finite, weights[i][i] ignored).
// Throws InvariantError when the node count is odd or a weight is not finite.
// Returns n/2 pairs, each (lo, hi) with lo < hi, sorted by lo.
std::vector<std::pair<int, int>> min_weight_perfect_matching(
    const std::vector<std::vector<double>>& weights);

// Internal integer engine: maximum-weight perfect matching on scaled integer
// weights. Exposed for direct testing against enumeration.
std::vector<int> max_weight_perfect_matching_int(
    const std::vector<std::vector<int64_t>>& w);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_MATCHING_HPP_
