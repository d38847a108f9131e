#include "subdiff/lattice.hpp"

namespace subdiff::lattice {

std::vector<std::vector<std::uint8_t>> connection_matrix(int k) {
    check_parent_count(k, kDenseCap);
    if (k < 1) throw std::invalid_argument("connection_matrix requires k >= 1");
    const std::size_t n = table_size(k);
    std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
    for (Mask s = 0; s < n; ++s)
        for (Mask c = 0; c < n; ++c) m[s][c] = (s & c) ? 1 : 0;
    return m;
}

std::vector<double> zeta_transform(std::vector<double> x, int k) {
    zeta_in_place(std::span<double>(x), k);
    return x;
}

std::vector<double> mobius_transform(std::vector<double> g, int k) {
    mobius_in_place(std::span<double>(g), k);
    return g;
}

std::vector<double> apply_connection(const std::vector<double>& b, int k) {
    return apply_connection_exact(b, k);
}

std::vector<Triple> enumerate_submodularity_triples(int k) {
    std::vector<Triple> out;
    for_each_submodularity_triple(k, [&](Mask s, Mask t, int u) { out.push_back({s, t, u}); });
    return out;
}

}  // namespace subdiff::lattice
