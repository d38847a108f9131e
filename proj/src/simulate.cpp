#include "subdiff/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "subdiff/rng.hpp"

namespace subdiff {

using lattice::Mask;

namespace {

// Salts keep the per-purpose draw streams apart.
constexpr std::uint64_t kSaltSweep = 1;
constexpr std::uint64_t kSaltBlueprint = 2;
constexpr std::uint64_t kSaltPattern = 3;
constexpr std::uint64_t kSaltMulti = 4;

Mask parent_state(const Network& net, int v, const std::vector<std::uint8_t>& active) {
    Mask s = 0;
    const auto& ps = net.parents[v];
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (active[ps[i]]) s |= Mask{1} << i;
    return s;
}

VertexSet run_sample(const Network& net, const VertexSet& seeds, std::uint64_t seed,
                     std::uint64_t sample) {
    std::vector<std::uint8_t> active(net.vertex_count(), 0);
    for (int s : seeds) active[s] = 1;
    for (int v : net.topo_order) {
        if (active[v]) continue;
        double p = net.tables[v].a[parent_state(net, v, active)];
        if (p > 0.0 && rng::uniform(seed, sample, static_cast<std::uint64_t>(v),
                                    kSaltSweep) < p)
            active[v] = 1;
    }
    VertexSet out;
    for (int v = 0; v < net.vertex_count(); ++v)
        if (active[v]) out.insert(v);
    return out;
}

}  // namespace

VertexSet seed_set(const Network& net, const std::vector<std::string>& names) {
    VertexSet out;
    for (const auto& n : names) out.insert(net.vertex_id(n));
    return out;
}

VertexSet simulate_once(const Network& net, const VertexSet& seeds,
                        std::uint64_t rng_seed) {
    for (int s : seeds)
        if (s < 0 || s >= net.vertex_count())
            throw std::invalid_argument("seed vertex out of range");
    return run_sample(net, seeds, rng_seed, 0);
}

std::map<std::uint32_t, double> exact_distribution(const Network& net,
                                                   const VertexSet& seeds) {
    if (net.vertex_count() > 20)
        throw std::invalid_argument("exact_distribution supports at most 20 vertices");
    std::uint32_t seed_mask = 0;
    for (int s : seeds) {
        if (s < 0 || s >= net.vertex_count())
            throw std::invalid_argument("seed vertex out of range");
        seed_mask |= std::uint32_t{1} << s;
    }
    std::map<std::uint32_t, double> dist{{seed_mask, 1.0}};
    for (int v : net.topo_order) {
        std::map<std::uint32_t, double> next;
        for (const auto& [mask, prob] : dist) {
            if (mask & (std::uint32_t{1} << v)) {
                next[mask] += prob;
                continue;
            }
            Mask s = 0;
            const auto& ps = net.parents[v];
            for (std::size_t i = 0; i < ps.size(); ++i)
                if (mask & (std::uint32_t{1} << ps[i])) s |= Mask{1} << i;
            double p = net.tables[v].a[s];
            if (p > 0.0) next[mask | (std::uint32_t{1} << v)] += prob * p;
            if (p < 1.0) next[mask] += prob * (1.0 - p);
        }
        dist = std::move(next);
    }
    return dist;
}

double exact_spread(const Network& net, const VertexSet& seeds) {
    double mean = 0.0;
    for (const auto& [mask, prob] : exact_distribution(net, seeds))
        mean += prob * std::popcount(mask);
    return mean;
}

Blueprint sample_blueprint(const Network& net, std::uint64_t rng_seed) {
    Blueprint bp;
    bp.responses.resize(net.vertex_count());
    for (int v = 0; v < net.vertex_count(); ++v) {
        const auto& a = net.tables[v].a;
        bp.responses[v].resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            bp.responses[v][i] =
                rng::uniform(rng_seed, static_cast<std::uint64_t>(v), i, kSaltBlueprint) <
                a[i];
    }
    return bp;
}

std::vector<Mask> sample_live_patterns(const Network& net,
                                       const ModelCertificate& certs,
                                       std::uint64_t rng_seed) {
    if (static_cast<int>(certs.vertices.size()) != net.vertex_count())
        throw std::invalid_argument("certificate count does not match network");
    std::vector<Mask> patterns(net.vertex_count(), 0);
    for (int v = 0; v < net.vertex_count(); ++v) {
        const auto& cert = certs.vertices[v];
        if (!cert.feasible)
            throw std::invalid_argument("cannot sample live pattern at infeasible vertex '" +
                                        net.names[v] + "'");
        double u = rng::uniform(rng_seed, static_cast<std::uint64_t>(v), 0, kSaltPattern);
        double cum = 0.0;
        Mask chosen = static_cast<Mask>(cert.b.size() - 1);
        for (Mask c = 0; c < cert.b.size(); ++c) {
            cum += cert.b[c];
            if (u < cum) {
                chosen = c;
                break;
            }
        }
        patterns[v] = chosen;
    }
    return patterns;
}

Blueprint blueprint_from_patterns(const Network& net, const std::vector<Mask>& patterns) {
    Blueprint bp;
    bp.responses.resize(net.vertex_count());
    for (int v = 0; v < net.vertex_count(); ++v) {
        const std::size_t n = net.tables[v].size();
        bp.responses[v].resize(n);
        for (Mask s = 0; s < n; ++s) bp.responses[v][s] = (s & patterns[v]) ? 1 : 0;
    }
    return bp;
}

VertexSet propagate_blueprint(const Blueprint& bp, const Network& net,
                              const VertexSet& seeds) {
    if (static_cast<int>(bp.responses.size()) != net.vertex_count())
        throw std::invalid_argument("blueprint shape does not match network");
    for (int v = 0; v < net.vertex_count(); ++v)
        if (bp.responses[v].size() != net.tables[v].size())
            throw std::invalid_argument("blueprint shape does not match network");
    std::vector<std::uint8_t> active(net.vertex_count(), 0);
    for (int s : seeds) active[s] = 1;
    for (int v : net.topo_order) {
        if (active[v]) continue;
        if (bp.responses[v][parent_state(net, v, active)]) active[v] = 1;
    }
    VertexSet out;
    for (int v = 0; v < net.vertex_count(); ++v)
        if (active[v]) out.insert(v);
    return out;
}

SpreadEstimate estimate_spread(const Network& net, const VertexSet& seeds,
                               std::int64_t samples, std::uint64_t rng_seed,
                               int workers) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    workers = std::max(workers, 1);

    std::vector<double> sums(workers, 0.0), sqsums(workers, 0.0);
    auto work = [&](int w) {
        double s = 0.0, sq = 0.0;
        for (std::int64_t j = w; j < samples; j += workers) {
            double size = static_cast<double>(
                run_sample(net, seeds, rng_seed, static_cast<std::uint64_t>(j)).size());
            s += size;
            sq += size * size;
        }
        sums[w] = s;
        sqsums[w] = sq;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    double sum = 0.0, sq = 0.0;
    for (int w = 0; w < workers; ++w) {
        sum += sums[w];
        sq += sqsums[w];
    }
    SpreadEstimate est;
    est.samples = samples;
    est.rng_seed = rng_seed;
    est.workers = workers;
    est.mean = sum / static_cast<double>(samples);
    double var = std::max(sq / samples - est.mean * est.mean, 0.0);
    if (samples > 1) var *= static_cast<double>(samples) / (samples - 1);
    est.stderr_ = std::sqrt(var / static_cast<double>(samples));
    return est;
}

int plmmi_type_count(const Network& net) {
    int n = 1;
    for (const auto& mw : net.multi)
        if (mw) n = std::max(n, mw->n_types);
    return n;
}

namespace {

struct MultiContext {
    const Network& net;
    int n_types;

    // E_n for every type at vertex v given current labels.
    std::vector<double> expectations(int v, const MultiState& labels) const {
        std::vector<double> e(n_types, 0.0);
        const auto& ps = net.parents[v];
        if (net.multi[v]) {
            const MultiWeights& mw = *net.multi[v];
            for (std::size_t i = 0; i < ps.size(); ++i) {
                int lab = labels[ps[i]];
                if (lab >= 1 && lab <= mw.n_types) e[lab - 1] += mw.w[i][lab - 1];
            }
        } else if (net.kinds[v] == ModelKind::LT && n_types == 1) {
            for (std::size_t i = 0; i < ps.size(); ++i)
                if (labels[ps[i]] == 1) e[0] += net.params[v][i];
        } else if (!ps.empty()) {
            throw std::invalid_argument("vertex '" + net.names[v] +
                                        "' lacks a multi-information model");
        }
        return e;
    }
};

MultiState seeded_labels(const Network& net, const std::vector<VertexSet>& seeds) {
    MultiState labels(net.vertex_count(), 0);
    for (std::size_t n = 0; n < seeds.size(); ++n) {
        for (int v : seeds[n]) {
            if (v < 0 || v >= net.vertex_count())
                throw std::invalid_argument("seed vertex out of range");
            if (labels[v] != 0)
                throw std::invalid_argument("per-type seed sets must be disjoint");
            labels[v] = static_cast<int>(n) + 1;
        }
    }
    return labels;
}

int cltm_winner(const std::vector<double>& e, const Network& net, int v,
                const MultiState& labels, TieRule tie_rule) {
    int best = 0;
    for (std::size_t n = 1; n < e.size(); ++n)
        if (e[n] > e[best]) best = static_cast<int>(n);
    if (tie_rule == TieRule::HighestWeight) {
        // Among tied maxima, prefer the type carried by the heaviest single
        // active parent weight; falls back to the lowest type index.
        double best_w = -1.0;
        int chosen = best;
        for (std::size_t n = 0; n < e.size(); ++n) {
            if (e[n] != e[best]) continue;
            double wmax = -1.0;
            const auto& ps = net.parents[v];
            if (net.multi[v]) {
                const MultiWeights& mw = *net.multi[v];
                for (std::size_t i = 0; i < ps.size(); ++i)
                    if (labels[ps[i]] == static_cast<int>(n) + 1)
                        wmax = std::max(wmax, mw.w[i][n]);
            }
            if (wmax > best_w) {
                best_w = wmax;
                chosen = static_cast<int>(n);
            }
        }
        return chosen;
    }
    // lowest type index among maxima
    for (std::size_t n = 0; n < e.size(); ++n)
        if (e[n] == e[best]) return static_cast<int>(n);
    return best;
}

}  // namespace

MultiState simulate_multi(const Network& net, const std::vector<VertexSet>& seeds,
                          std::uint64_t rng_seed) {
    MultiContext ctx{net, std::max(plmmi_type_count(net), static_cast<int>(seeds.size()))};
    MultiState labels = seeded_labels(net, seeds);
    for (int v : net.topo_order) {
        if (labels[v] != 0 || net.parents[v].empty()) continue;
        std::vector<double> e = ctx.expectations(v, labels);
        double u = rng::uniform(rng_seed, 0, static_cast<std::uint64_t>(v), kSaltMulti);
        double cum = 0.0;
        for (int n = 0; n < ctx.n_types; ++n) {
            cum += e[n];
            if (u < cum) {
                labels[v] = n + 1;
                break;
            }
        }
    }
    return labels;
}

MultiState simulate_cltm(const Network& net, const std::vector<VertexSet>& seeds,
                         std::uint64_t rng_seed, TieRule tie_rule) {
    MultiContext ctx{net, std::max(plmmi_type_count(net), static_cast<int>(seeds.size()))};
    MultiState labels = seeded_labels(net, seeds);
    for (int v : net.topo_order) {
        if (labels[v] != 0 || net.parents[v].empty()) continue;
        std::vector<double> e = ctx.expectations(v, labels);
        double total = 0.0;
        for (double x : e) total += x;
        double theta = rng::uniform(rng_seed, 0, static_cast<std::uint64_t>(v), kSaltMulti);
        if (theta < total) labels[v] = cltm_winner(e, net, v, labels, tie_rule) + 1;
    }
    return labels;
}

namespace {

std::map<std::uint64_t, double> exact_label_distribution(
    const Network& net, const std::vector<VertexSet>& seeds, bool cltm,
    TieRule tie_rule) {
    if (net.vertex_count() > 10)
        throw std::invalid_argument("exact multi distribution supports at most 10 vertices");
    MultiContext ctx{net, std::max(plmmi_type_count(net), static_cast<int>(seeds.size()))};
    if (ctx.n_types > 3) throw std::invalid_argument("at most 3 information types");
    const int base = ctx.n_types + 1;

    MultiState init = seeded_labels(net, seeds);
    std::vector<std::uint64_t> place(net.vertex_count(), 1);
    for (int v = 1; v < net.vertex_count(); ++v) place[v] = place[v - 1] * base;

    auto encode_seeded = [&]() {
        std::uint64_t code = 0;
        for (int v = 0; v < net.vertex_count(); ++v) code += place[v] * init[v];
        return code;
    };
    auto decode = [&](std::uint64_t code) {
        MultiState labels(net.vertex_count());
        for (int v = 0; v < net.vertex_count(); ++v)
            labels[v] = static_cast<int>(code / place[v] % base);
        return labels;
    };

    std::map<std::uint64_t, double> dist{{encode_seeded(), 1.0}};
    for (int v : net.topo_order) {
        if (init[v] != 0) continue;  // seed labels are fixed
        std::map<std::uint64_t, double> next;
        for (const auto& [code, prob] : dist) {
            MultiState labels = decode(code);
            if (net.parents[v].empty()) {
                next[code] += prob;
                continue;
            }
            std::vector<double> e = ctx.expectations(v, labels);
            double total = 0.0;
            for (double x : e) total += x;
            if (cltm) {
                if (total > 0.0) {
                    int winner = cltm_winner(e, net, v, labels, tie_rule);
                    next[code + place[v] * (winner + 1)] += prob * total;
                }
                if (total < 1.0) next[code] += prob * (1.0 - total);
            } else {
                for (int n = 0; n < ctx.n_types; ++n)
                    if (e[n] > 0.0) next[code + place[v] * (n + 1)] += prob * e[n];
                if (total < 1.0) next[code] += prob * (1.0 - total);
            }
        }
        dist = std::move(next);
    }
    return dist;
}

}  // namespace

std::map<std::uint64_t, double> exact_multi_distribution(
    const Network& net, const std::vector<VertexSet>& seeds) {
    return exact_label_distribution(net, seeds, false, TieRule::LowestTypeIndex);
}

std::map<std::uint64_t, double> exact_cltm_distribution(
    const Network& net, const std::vector<VertexSet>& seeds, TieRule tie_rule) {
    return exact_label_distribution(net, seeds, true, tie_rule);
}

double exact_multi_spread(const Network& net, const std::vector<VertexSet>& seeds,
                          int type) {
    MultiContext ctx{net, std::max(plmmi_type_count(net), static_cast<int>(seeds.size()))};
    const int base = ctx.n_types + 1;
    double mean = 0.0;
    for (const auto& [code, prob] : exact_multi_distribution(net, seeds)) {
        std::uint64_t c = code;
        int count = 0;
        for (int v = 0; v < net.vertex_count(); ++v) {
            if (static_cast<int>(c % base) == type) ++count;
            c /= base;
        }
        mean += prob * count;
    }
    return mean;
}

}  // namespace subdiff
