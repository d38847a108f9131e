#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Subset-lattice primitives over bitmask-indexed tables of length 2^k.
// States and connection patterns are 0-based bitmasks: bit m set means
// parent m (in the vertex's fixed parent order) is activated / connected.

namespace subdiff::lattice {

using Mask = std::uint32_t;

// Hard cap on parent counts everywhere in the library (table size 2^20).
inline constexpr int kMaxParents = 20;
// Largest k for which the connection matrix is materialized densely.
inline constexpr int kDenseCap = 12;

inline std::size_t table_size(int k) { return std::size_t{1} << k; }

inline void check_parent_count(int k, int cap = kMaxParents) {
    if (k < 0 || k > cap)
        throw std::invalid_argument("parent count k=" + std::to_string(k) +
                                    " out of range [0," + std::to_string(cap) + "]");
}

inline void check_length(std::size_t n, int k) {
    if (n != table_size(k))
        throw std::invalid_argument("lattice vector length " + std::to_string(n) +
                                    " does not match 2^" + std::to_string(k));
}

// Dense 0/1 connection matrix: entry (s, c) is 1 iff state s and pattern c
// share a set bit. Row 0 and column 0 are identically zero.
std::vector<std::vector<std::uint8_t>> connection_matrix(int k);

// In-place fast zeta transform: x[t] <- sum over subsets c of t of x[c].
// O(k 2^k). Works over any additive value type (double, rationals, ...).
template <class T>
void zeta_in_place(std::span<T> x, int k) {
    check_length(x.size(), k);
    for (int m = 0; m < k; ++m) {
        const Mask bit = Mask{1} << m;
        for (Mask t = 0; t < x.size(); ++t)
            if (t & bit) x[t] += x[t ^ bit];
    }
}

// In-place Mobius transform, the exact inverse of zeta_in_place.
template <class T>
void mobius_in_place(std::span<T> x, int k) {
    check_length(x.size(), k);
    for (int m = 0; m < k; ++m) {
        const Mask bit = Mask{1} << m;
        for (Mask t = 0; t < x.size(); ++t)
            if (t & bit) x[t] -= x[t ^ bit];
    }
}

std::vector<double> zeta_transform(std::vector<double> x, int k);
std::vector<double> mobius_transform(std::vector<double> g, int k);

// Mb without materializing M:
//   (Mb)[s] = sum over c with c & s != 0 of b[c]
//           = (sum b) - zeta(b)[~s & full]
// M is symmetric, so this is also M^T b.
std::vector<double> apply_connection(const std::vector<double>& b, int k);

template <class T>
std::vector<T> apply_connection_exact(const std::vector<T>& b, int k) {
    check_length(b.size(), k);
    std::vector<T> z = b;
    zeta_in_place(std::span<T>(z), k);
    const Mask full = static_cast<Mask>(table_size(k) - 1);
    T total = z[full];
    std::vector<T> out(b.size());
    for (Mask s = 0; s < out.size(); ++s) out[s] = total - z[(~s) & full];
    return out;
}

// The quantifier range of the diminishing-returns inequality restricted to
// one vertex's parent set: every (S, T, u) with S subset of T subset of
// [k] \ {u}. Count is k * 3^(k-1).
struct Triple {
    Mask s;
    Mask t;
    int u;
};

std::vector<Triple> enumerate_submodularity_triples(int k);

template <class F>
void for_each_submodularity_triple(int k, F&& visit) {
    check_parent_count(k, kDenseCap);
    const Mask full = static_cast<Mask>(table_size(k) - 1);
    for (int u = 0; u < k; ++u) {
        const Mask rest = full & ~(Mask{1} << u);
        // iterate t over subsets of rest, s over subsets of t
        Mask t = rest;
        while (true) {
            Mask s = t;
            while (true) {
                visit(s, t, u);
                if (s == 0) break;
                s = (s - 1) & t;
            }
            if (t == 0) break;
            t = (t - 1) & rest;
        }
    }
}

}  // namespace subdiff::lattice
