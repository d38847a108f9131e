#pragma once

#include <vector>

#include "subdiff/certify.hpp"
#include "subdiff/model.hpp"

namespace subdiff {

inline constexpr double kDefaultProjectionTol = 1e-8;
inline constexpr int kDefaultProjectionMaxIter = 50000;

struct ProjectionResult {
    ActivationTable a_star;
    std::vector<double> b_star;
    double objective = 0.0;  // squared 2-norm distance to the input table
    int iterations = 0;
    bool converged = true;
    std::vector<double> objective_history;  // accepted solver objectives
};

// Euclidean projection of v onto {x >= 0, sum x = total}; sort-and-threshold.
std::vector<double> project_to_simplex(std::vector<double> v, double total = 1.0);

// Nearest point of C = {Mb : b on the probability simplex} in squared
// 2-norm. Simplex-constrained least squares in b, solved by monotone
// accelerated projected gradient with step 1/L (L from power iteration on
// M^T M). Feasible tables short-circuit to the identity.
ProjectionResult project_vertex(const ActivationTable& a,
                                double tol = kDefaultProjectionTol,
                                int max_iter = kDefaultProjectionMaxIter);

struct ModelProjection {
    Network net;
    std::vector<ProjectionResult> per_vertex;
    bool converged = true;
};

// Applies the per-vertex projection to every table of a network; already
// feasible vertices are left bit-identical.
ModelProjection project_model(const Network& net, double tol = kDefaultProjectionTol,
                              int max_iter = kDefaultProjectionMaxIter);

struct MultiProjectionResult {
    std::vector<ActivationTable> a_star;       // one per information type
    std::vector<std::vector<double>> b_star;   // full lattice vectors, one per type
    double slack = 0.0;                        // residual mass on the empty pattern
    double objective = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Competitive projection: minimize sum_n |a_n - M b_n|^2 with each b_n
// supported on singleton patterns, all coefficients nonnegative, and the
// grand total (plus one slack coordinate) equal to 1. With full_support the
// N = 1 case reproduces project_vertex.
MultiProjectionResult project_multi(const std::vector<ActivationTable>& tables,
                                    double tol = kDefaultProjectionTol,
                                    int max_iter = kDefaultProjectionMaxIter,
                                    bool full_support = false);

}  // namespace subdiff
