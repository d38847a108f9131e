#pragma once

#include <cstdint>
#include <vector>

#include "subdiff/model.hpp"

namespace subdiff {

inline constexpr double kDefaultFeasibilityTol = 1e-9;

// Outcome of the coverage test at one vertex: either a representing
// probability vector b with a = Mb, or the most negative lattice
// coefficient as an infeasibility witness.
struct CoverageCertificate {
    bool feasible = false;
    std::vector<double> b;            // present iff feasible
    lattice::Mask witness_pattern = 0;  // present iff infeasible
    double witness_value = 0.0;
    double residual = 0.0;  // max abs reconstruction error of the candidate b
};

struct ModelCertificate {
    bool feasible = false;
    std::vector<CoverageCertificate> vertices;
    double eps = kDefaultFeasibilityTol;
};

// Recovers the unique candidate b by inclusion-exclusion:
// g[t] = 1 - a[~t], b = mobius(g). Feasible iff min(b) >= -eps and the
// reconstruction Mb matches a (which requires a[empty] = 0 and sum b = 1).
// Near-zero negatives are clamped and b renormalized.
CoverageCertificate certify_vertex(const ActivationTable& a,
                                   double eps = kDefaultFeasibilityTol);

ModelCertificate certify_model(const Network& net, double eps = kDefaultFeasibilityTol);

enum class ViolationKind { Nonnegative, Monotone, Submodular };

struct Violation {
    ViolationKind kind;
    lattice::Mask s;
    lattice::Mask t;
    int u;  // -1 for nonnegativity / monotonicity records
    double margin;
};

struct Theorem2Report {
    bool nonnegative = true;
    bool monotone = true;
    bool submodular = true;
    std::vector<Violation> violations;

    bool all() const { return nonnegative && monotone && submodular; }
};

// Direct per-vertex checks: min a >= 0; a[S] <= a[T] for S subset T; the
// diminishing-returns inequality over all k*3^(k-1) triples.
Theorem2Report theorem2_check(const ActivationTable& a,
                              double eps = kDefaultFeasibilityTol);

// Probes the claimed equivalence of the two per-vertex conditions: generates
// random monotone tables with a[empty] = 0 plus known candidates, keeps those
// passing theorem2_check, and returns the subset certify_vertex rejects.
// Deterministic given rng_seed.
std::vector<ActivationTable> falsify_equivalence(int k, int samples,
                                                 std::uint64_t rng_seed);

}  // namespace subdiff
