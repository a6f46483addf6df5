#ifndef STARKRES_MATCHING_HPP
#define STARKRES_MATCHING_HPP

#include <complex>
#include <vector>

namespace starkres {

struct MatchResult {
    // pair_of_left[i] = index into right, or -1 when unmatched (size mismatch)
    std::vector<int> pair_of_left;
    double max_distance = 0.0;
    double total_distance = 0.0;
};

// Greedy nearest-neighbor matching of two eigenvalue lists; on a collision it
// falls back to an optimal assignment (<= 50 items per side).  Ties broken by
// ascending real part.
MatchResult match_eigenvalues(const std::vector<std::complex<double>>& left,
                              const std::vector<std::complex<double>>& right);

}  // namespace starkres

#endif
