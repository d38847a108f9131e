#pragma once

#include <cstdint>
#include <vector>

#include "subdiff/simulate.hpp"

namespace subdiff {

struct Estimator {
    enum class Kind { Exact, MonteCarlo };
    Kind kind = Kind::Exact;
    std::int64_t samples = 10000;
    std::uint64_t rng_seed = 0;
    int workers = 1;
};

struct GreedyTrace {
    std::vector<int> chosen;
    std::vector<double> marginal_gains;
    std::vector<double> gain_stderr;  // zero for the exact estimator
    std::int64_t evaluations = 0;     // spread evaluations performed
};

// Sequential marginal-gain maximization with CELF-style lazy re-evaluation
// of cached upper bounds. Ties broken by lowest vertex id. `lazy = false`
// re-evaluates every candidate each round (used for equivalence testing).
GreedyTrace greedy_select(const Network& net, int budget, const Estimator& est,
                          bool lazy = true);

struct OptResult {
    VertexSet seeds;
    double spread = 0.0;
};

// Exhaustive maximum of the exact spread over all budget-sized seed sets.
// Ties broken lexicographically. Requires |V| <= 14 and C(|V|, K) <= 1e6.
OptResult brute_force_opt(const Network& net, int budget);

}  // namespace subdiff
