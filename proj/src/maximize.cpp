#include "subdiff/maximize.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace subdiff {

namespace {

double evaluate(const Network& net, const VertexSet& seeds, const Estimator& est,
                std::int64_t& evaluations, double* stderr_out = nullptr) {
    ++evaluations;
    if (est.kind == Estimator::Kind::Exact) {
        if (stderr_out) *stderr_out = 0.0;
        return exact_spread(net, seeds);
    }
    SpreadEstimate e = estimate_spread(net, seeds, est.samples, est.rng_seed, est.workers);
    if (stderr_out) *stderr_out = e.stderr_;
    return e.mean;
}

}  // namespace

GreedyTrace greedy_select(const Network& net, int budget, const Estimator& est,
                          bool lazy) {
    const int n = net.vertex_count();
    if (budget < 0) throw std::invalid_argument("budget out of range");
    budget = std::min(budget, n);

    GreedyTrace trace;
    VertexSet chosen;
    double current = 0.0;

    struct Entry {
        double gain;
        int vertex;
        int round;  // round in which the gain was computed
        bool operator<(const Entry& other) const {
            if (gain != other.gain) return gain < other.gain;
            return vertex > other.vertex;  // lowest id wins ties
        }
    };
    std::priority_queue<Entry> queue;
    for (int v = 0; v < n; ++v) {
        VertexSet s = {v};
        double g = evaluate(net, s, est, trace.evaluations);
        queue.push({g, v, 0});
    }

    for (int step = 0; step < budget; ++step) {
        double step_stderr = 0.0;
        int pick = -1;
        double pick_gain = 0.0;
        if (lazy) {
            while (true) {
                Entry top = queue.top();
                queue.pop();
                if (top.round == step) {
                    pick = top.vertex;
                    pick_gain = top.gain;
                    break;
                }
                VertexSet s = chosen;
                s.insert(top.vertex);
                double g = evaluate(net, s, est, trace.evaluations, &step_stderr) - current;
                queue.push({g, top.vertex, step});
            }
        } else {
            // naive mode: refresh every remaining candidate this round
            std::vector<Entry> fresh;
            for (int v = 0; v < n; ++v) {
                if (chosen.count(v)) continue;
                VertexSet s = chosen;
                s.insert(v);
                double g = evaluate(net, s, est, trace.evaluations, &step_stderr) - current;
                fresh.push_back({g, v, step});
            }
            Entry best = fresh.front();
            for (const Entry& e : fresh)
                if (best < e) best = e;
            pick = best.vertex;
            pick_gain = best.gain;
        }
        chosen.insert(pick);
        current += pick_gain;
        trace.chosen.push_back(pick);
        trace.marginal_gains.push_back(pick_gain);
        trace.gain_stderr.push_back(step_stderr);
        if (lazy) {
            // rebuild queue without the chosen vertex
            std::priority_queue<Entry> next;
            while (!queue.empty()) {
                Entry e = queue.top();
                queue.pop();
                if (e.vertex != pick) next.push(e);
            }
            queue = std::move(next);
        }
    }
    return trace;
}

OptResult brute_force_opt(const Network& net, int budget) {
    const int n = net.vertex_count();
    if (n > 14) throw std::invalid_argument("brute_force_opt supports at most 14 vertices");
    if (budget < 0 || budget > n) throw std::invalid_argument("budget out of range");

    // C(n, K) cap
    double combos = 1.0;
    for (int i = 0; i < budget; ++i) combos = combos * (n - i) / (i + 1);
    if (combos > 1e6) throw std::invalid_argument("instance too large for brute force");

    OptResult best;
    if (budget == 0) {
        best.spread = exact_spread(net, {});
        return best;
    }
    std::vector<int> idx(budget);
    for (int i = 0; i < budget; ++i) idx[i] = i;
    bool first = true;
    while (true) {
        VertexSet seeds(idx.begin(), idx.end());
        double spread = exact_spread(net, seeds);
        // combinations arrive in lexicographic order, so ties keep the first
        if (first || spread > best.spread + 1e-12) {
            best.spread = spread;
            best.seeds = seeds;
            first = false;
        }
        // next lexicographic combination
        int i = budget - 1;
        while (i >= 0 && idx[i] == n - budget + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < budget; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

}  // namespace subdiff
