#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "subdiff/certify.hpp"
#include "subdiff/model.hpp"

namespace subdiff {

using VertexSet = std::set<int>;

// One deterministic response rule per vertex: entry i of responses[v] is
// the (binary) reaction of v under parent state i.
struct Blueprint {
    std::vector<std::vector<std::uint8_t>> responses;
};

struct SpreadEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    std::uint64_t rng_seed = 0;
    int workers = 1;
};

// Per-vertex label: 0 = inactive, 1..N = activated by that information type.
using MultiState = std::vector<int>;

enum class TieRule { LowestTypeIndex, HighestWeight };

VertexSet seed_set(const Network& net, const std::vector<std::string>& names);

// One propagation: seeds pre-activated, then a topological sweep sampling
// each vertex from its activation table. Deterministic given rng_seed.
VertexSet simulate_once(const Network& net, const VertexSet& seeds,
                        std::uint64_t rng_seed);

// Exact outcome distribution P(T | S) over final activation sets, as
// bitmask -> probability. Requires |V| <= 20.
std::map<std::uint32_t, double> exact_distribution(const Network& net,
                                                   const VertexSet& seeds);

// Expected number of activated vertices under the exact distribution.
double exact_spread(const Network& net, const VertexSet& seeds);

Blueprint sample_blueprint(const Network& net, std::uint64_t rng_seed);

// One connection pattern per vertex drawn from its certificate's b.
std::vector<lattice::Mask> sample_live_patterns(const Network& net,
                                                const ModelCertificate& certs,
                                                std::uint64_t rng_seed);

Blueprint blueprint_from_patterns(const Network& net,
                                  const std::vector<lattice::Mask>& patterns);

// Deterministic evaluator f(G, S): topological sweep applying each response
// rule to the realized parent state.
VertexSet propagate_blueprint(const Blueprint& bp, const Network& net,
                              const VertexSet& seeds);

// Monte Carlo spread. Sample j uses substream (rng_seed, j), so results are
// bitwise identical for any worker count; workers only split the budget.
SpreadEstimate estimate_spread(const Network& net, const VertexSet& seeds,
                               std::int64_t samples, std::uint64_t rng_seed,
                               int workers = 1);

// Partial linear multi-information sweep: per vertex, the interval
// [0, E_1), [E_1, E_1+E_2), ... of [0,1] decides the activating type,
// the residual interval leaves the vertex inactive.
MultiState simulate_multi(const Network& net, const std::vector<VertexSet>& seeds,
                          std::uint64_t rng_seed);

// Competitive linear threshold sweep: one uniform threshold per vertex,
// activation iff sum_n E_n >= theta, type = argmax E_n with ties broken by
// tie_rule.
MultiState simulate_cltm(const Network& net, const std::vector<VertexSet>& seeds,
                         std::uint64_t rng_seed, TieRule tie_rule);

// Exact label distribution (|V| <= 10, N <= 3); keys encode labels in base
// N + 1 along vertex order.
std::map<std::uint64_t, double> exact_multi_distribution(
    const Network& net, const std::vector<VertexSet>& seeds);

std::map<std::uint64_t, double> exact_cltm_distribution(
    const Network& net, const std::vector<VertexSet>& seeds, TieRule tie_rule);

// Expected count of vertices labeled with the given type (1-based) under
// exact_multi_distribution.
double exact_multi_spread(const Network& net, const std::vector<VertexSet>& seeds,
                          int type);

int plmmi_type_count(const Network& net);

}  // namespace subdiff
