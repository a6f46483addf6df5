#include "starkres/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace starkres {

namespace {

using Cx = std::complex<double>;

// Hungarian algorithm (shortest augmenting path with potentials), O(n^3).
std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& cost) {
    int nl = static_cast<int>(cost.size());
    int nr = nl > 0 ? static_cast<int>(cost[0].size()) : 0;
    int nn = std::max(nl, nr);
    const double inf = std::numeric_limits<double>::infinity();
    // square padded cost, 1-based working arrays
    std::vector<double> u(nn + 1, 0.0), v(nn + 1, 0.0);
    std::vector<int> p(nn + 1, 0), way(nn + 1, 0);
    auto c = [&](int i, int j) {
        return (i < nl && j < nr) ? cost[i][j] : 0.0;
    };
    for (int i = 1; i <= nn; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(nn + 1, inf);
        std::vector<bool> used(nn + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= nn; ++j) {
                if (used[j]) continue;
                double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= nn; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> match(nl, -1);
    for (int j = 1; j <= nn; ++j)
        if (p[j] >= 1 && p[j] <= nl && j <= nr) match[p[j] - 1] = j - 1;
    return match;
}

}  // namespace

MatchResult match_eigenvalues(const std::vector<Cx>& left, const std::vector<Cx>& right) {
    MatchResult res;
    res.pair_of_left.assign(left.size(), -1);
    if (left.empty() || right.empty()) return res;

    // greedy pass, ties broken by ascending real part of the candidate
    std::vector<int> claim(right.size(), -1);
    bool collision = false;
    for (std::size_t i = 0; i < left.size(); ++i) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < right.size(); ++j) {
            double d = std::abs(left[i] - right[j]);
            if (d < bd || (d == bd && best >= 0 && right[j].real() < right[best].real())) {
                bd = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            if (claim[best] >= 0) collision = true;
            claim[best] = static_cast<int>(i);
            res.pair_of_left[i] = best;
        }
    }

    if (collision || left.size() > right.size()) {
        if (left.size() > 50 || right.size() > 50)
            throw std::invalid_argument(
                "match_eigenvalues: collision fallback limited to 50 items per side");
        std::vector<std::vector<double>> cost(left.size(), std::vector<double>(right.size()));
        for (std::size_t i = 0; i < left.size(); ++i)
            for (std::size_t j = 0; j < right.size(); ++j) cost[i][j] = std::abs(left[i] - right[j]);
        res.pair_of_left = optimal_assignment(cost);
    }

    res.max_distance = 0.0;
    res.total_distance = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        int j = res.pair_of_left[i];
        if (j < 0) continue;
        double d = std::abs(left[i] - right[j]);
        res.max_distance = std::max(res.max_distance, d);
        res.total_distance += d;
    }
    return res;
}

}  // namespace starkres
