#include "subdiff/certify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "subdiff/rng.hpp"

namespace subdiff {

using lattice::Mask;

CoverageCertificate certify_vertex(const ActivationTable& table, double eps) {
    const int k = table.k;
    lattice::check_length(table.a.size(), k);
    const Mask full = static_cast<Mask>(lattice::table_size(k) - 1);

    // Unique candidate: zeta(b)[t] must equal 1 - a[~t], so b = mobius(g).
    std::vector<double> g(table.a.size());
    for (Mask t = 0; t <= full; ++t) g[t] = 1.0 - table.a[(~t) & full];
    std::vector<double> b = lattice::mobius_transform(std::move(g), k);

    CoverageCertificate cert;
    double sum = 0.0;
    double min_val = 0.0;
    Mask min_pattern = 0;
    for (Mask c = 0; c <= full; ++c) {
        sum += b[c];
        if (b[c] < min_val) {
            min_val = b[c];
            min_pattern = c;
        }
    }
    std::vector<double> recon = lattice::apply_connection(b, k);
    double residual = 0.0;
    for (Mask s = 0; s <= full; ++s)
        residual = std::max(residual, std::abs(recon[s] - table.a[s]));
    cert.residual = residual;

    const bool ok = min_val >= -eps && std::abs(sum - 1.0) <= eps && residual <= eps;
    if (!ok) {
        cert.feasible = false;
        if (min_val < -eps) {
            cert.witness_pattern = min_pattern;
            cert.witness_value = min_val;
        } else {
            // Normalization failure (a[empty] > 0): report the empty pattern
            // with the mass deficit.
            cert.witness_pattern = 0;
            cert.witness_value = sum - 1.0 != 0.0 ? sum - 1.0 : -residual;
        }
        return cert;
    }

    // Clamp rounding negatives and renormalize.
    double clamped_sum = 0.0;
    for (double& x : b) {
        if (x < 0.0) x = 0.0;
        clamped_sum += x;
    }
    if (clamped_sum > 0.0)
        for (double& x : b) x /= clamped_sum;
    cert.feasible = true;
    cert.b = std::move(b);
    return cert;
}

ModelCertificate certify_model(const Network& net, double eps) {
    ModelCertificate out;
    out.eps = eps;
    out.feasible = true;
    out.vertices.reserve(net.vertex_count());
    for (int v = 0; v < net.vertex_count(); ++v) {
        out.vertices.push_back(certify_vertex(net.tables[v], eps));
        if (!out.vertices.back().feasible) out.feasible = false;
    }
    return out;
}

Theorem2Report theorem2_check(const ActivationTable& table, double eps) {
    const int k = table.k;
    lattice::check_parent_count(k, lattice::kDenseCap);
    lattice::check_length(table.a.size(), k);
    const Mask full = static_cast<Mask>(lattice::table_size(k) - 1);
    Theorem2Report rep;

    for (Mask s = 0; s <= full; ++s) {
        if (table.a[s] < -eps) {
            rep.nonnegative = false;
            rep.violations.push_back({ViolationKind::Nonnegative, s, s, -1, table.a[s]});
        }
    }
    // Monotonicity along single-bit extensions implies it along inclusion.
    for (Mask s = 0; s <= full; ++s) {
        for (int m = 0; m < k; ++m) {
            const Mask bit = Mask{1} << m;
            if (s & bit) continue;
            double margin = table.a[s | bit] - table.a[s];
            if (margin < -eps) {
                rep.monotone = false;
                rep.violations.push_back({ViolationKind::Monotone, s, s | bit, m, margin});
            }
        }
    }
    lattice::for_each_submodularity_triple(k, [&](Mask s, Mask t, int u) {
        const Mask bit = Mask{1} << u;
        double margin = (table.a[s | bit] - table.a[s]) - (table.a[t | bit] - table.a[t]);
        if (margin < -eps) {
            rep.submodular = false;
            rep.violations.push_back({ViolationKind::Submodular, s, t, u, margin});
        }
    });
    return rep;
}

namespace {

// Random monotone table: 2^k uniforms, pushed up along the lattice by
// max-with-subsets, a[empty] forced to 0, rescaled into [0,1].
ActivationTable random_monotone_table(int k, rng::Stream& stream) {
    std::vector<double> a(lattice::table_size(k));
    for (double& x : a) x = stream.next();
    a[0] = 0.0;
    for (int m = 0; m < k; ++m) {
        const Mask bit = Mask{1} << m;
        for (Mask s = 0; s < a.size(); ++s)
            if (s & bit) a[s] = std::max(a[s], a[s ^ bit]);
    }
    double top = a[a.size() - 1];
    if (top > 0.0)
        for (double& x : a) x /= top;
    return {k, std::move(a)};
}

}  // namespace

std::vector<ActivationTable> falsify_equivalence(int k, int samples,
                                                 std::uint64_t rng_seed) {
    if (k < 2 || k > 6) throw std::invalid_argument("falsify_equivalence needs 2 <= k <= 6");
    std::vector<ActivationTable> candidates;

    // Known candidates: truncated-cardinality tables a[s] = min(|s|, m) / m.
    for (int m = 1; m < k; ++m) {
        std::vector<double> a(lattice::table_size(k));
        for (Mask s = 0; s < a.size(); ++s)
            a[s] = static_cast<double>(std::min(std::popcount(s), m)) / m;
        candidates.push_back({k, std::move(a)});
    }
    rng::Stream stream(rng_seed, 0);
    for (int i = 0; i < samples; ++i) candidates.push_back(random_monotone_table(k, stream));

    std::vector<ActivationTable> divergences;
    for (auto& cand : candidates) {
        if (!theorem2_check(cand).all()) continue;
        if (!certify_vertex(cand).feasible) divergences.push_back(std::move(cand));
    }
    return divergences;
}

}  // namespace subdiff
