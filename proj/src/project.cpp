#include "subdiff/project.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subdiff {

using lattice::Mask;

std::vector<double> project_to_simplex(std::vector<double> v, double total) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0;
    double theta = 0.0;
    int support = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (cum - total) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            theta = t;
            support = static_cast<int>(j + 1);
        }
    }
    if (support == 0) theta = (std::accumulate(u.begin(), u.end(), 0.0) - total) / u.size();
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

namespace {

double squared_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// Upper bound on the largest eigenvalue of M^T M = M^2 (M is symmetric):
// power iteration with a safety factor.
double lipschitz_bound(int k) {
    const std::size_t n = lattice::table_size(k);
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double lambda = 1.0;
    for (int round = 0; round < 50; ++round) {
        std::vector<double> y = lattice::apply_connection(x, k);
        y = lattice::apply_connection(y, k);
        double norm = std::sqrt(squared_norm(y));
        if (norm <= 0.0) return 1.0;
        lambda = norm / std::max(std::sqrt(squared_norm(x)), 1e-300);
        for (double& v : y) v /= norm;
        x = std::move(y);
    }
    return lambda * 1.01;
}

struct QuadraticObjective {
    // f(b) = |Mb - a|^2 on the full lattice; gradient 2 M (Mb - a).
    const std::vector<double>* a;
    int k;

    double value(const std::vector<double>& b) const {
        std::vector<double> r = lattice::apply_connection(b, k);
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            double d = r[i] - (*a)[i];
            s += d * d;
        }
        return s;
    }

    std::vector<double> gradient(const std::vector<double>& b) const {
        std::vector<double> r = lattice::apply_connection(b, k);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= (*a)[i];
        std::vector<double> g = lattice::apply_connection(r, k);
        for (double& v : g) v *= 2.0;
        return g;
    }
};

// Monotone accelerated projected gradient over the probability simplex.
// One plain 1/L step from the current iterate per round guarantees a
// non-increasing objective; the momentum candidate is taken when it is at
// least as good, with the momentum reset otherwise.
template <class Value, class Gradient, class Project>
int solve_apg(std::vector<double>& b, Value&& value, Gradient&& gradient,
              Project&& project, double step, double tol, int max_iter,
              bool& converged, std::vector<double>* history = nullptr) {
    std::vector<double> prev = b;
    double fb = value(b);
    double t_prev = 1.0;
    int it = 0;
    converged = false;
    if (history) history->push_back(fb);
    for (; it < max_iter; ++it) {
        std::vector<double> grad_b = gradient(b);
        std::vector<double> plain(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) plain[i] = b[i] - step * grad_b[i];
        plain = project(std::move(plain));

        // Fixed-point residual of the projected gradient map: b is optimal
        // iff it is a fixed point of b -> P(b - step * grad).
        double pg = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            double d = b[i] - plain[i];
            pg += d * d;
        }
        if (std::sqrt(pg) <= tol) {
            converged = true;
            break;
        }

        double t_cur = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
        double beta = (t_prev - 1.0) / t_cur;
        std::vector<double> y(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) y[i] = b[i] + beta * (b[i] - prev[i]);
        std::vector<double> grad_y = gradient(y);
        std::vector<double> cand(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) cand[i] = y[i] - step * grad_y[i];
        cand = project(std::move(cand));

        double f_plain = value(plain);
        double f_cand = value(cand);
        prev = b;
        if (f_cand <= f_plain) {
            b = std::move(cand);
            fb = f_cand;
            t_prev = t_cur;
        } else {
            b = std::move(plain);
            fb = f_plain;
            t_prev = 1.0;  // adaptive restart
        }
        if (history) history->push_back(fb);
    }
    return it;
}

}  // namespace

ProjectionResult project_vertex(const ActivationTable& a, double tol, int max_iter) {
    const int k = a.k;
    lattice::check_length(a.a.size(), k);

    CoverageCertificate cert = certify_vertex(a);
    if (cert.feasible) {
        ProjectionResult res;
        res.a_star = a;  // identity short-circuit
        res.b_star = std::move(cert.b);
        res.objective = 0.0;
        res.iterations = 0;
        res.converged = true;
        return res;
    }
    if (k == 0) {
        // C is the single point (0).
        ProjectionResult res;
        res.a_star = {0, {0.0}};
        res.b_star = {1.0};
        res.objective = a.a[0] * a.a[0];
        res.converged = true;
        return res;
    }

    const double L = lipschitz_bound(k);
    QuadraticObjective obj{&a.a, k};
    std::vector<double> b(a.a.size(), 1.0 / static_cast<double>(a.a.size()));
    bool converged = false;
    ProjectionResult res;
    int iters = solve_apg(
        b, [&](const std::vector<double>& x) { return obj.value(x); },
        [&](const std::vector<double>& x) { return obj.gradient(x); },
        [](std::vector<double> x) { return project_to_simplex(std::move(x)); }, 1.0 / L,
        tol, max_iter, converged, &res.objective_history);

    res.b_star = b;
    std::vector<double> astar = lattice::apply_connection(b, k);
    for (double& v : astar) v = std::clamp(v, 0.0, 1.0);
    astar[0] = 0.0;
    res.objective = 0.0;
    for (std::size_t i = 0; i < astar.size(); ++i) {
        double d = astar[i] - a.a[i];
        res.objective += d * d;
    }
    res.a_star = {k, std::move(astar)};
    res.iterations = iters;
    res.converged = converged;
    return res;
}

ModelProjection project_model(const Network& net, double tol, int max_iter) {
    ModelProjection out;
    out.net = net;
    out.per_vertex.reserve(net.vertex_count());
    for (int v = 0; v < net.vertex_count(); ++v) {
        ProjectionResult res = project_vertex(net.tables[v], tol, max_iter);
        if (!res.converged) out.converged = false;
        if (res.objective > 0.0 || net.spontaneous[v]) {
            out.net.tables[v] = res.a_star;
            out.net.kinds[v] = ModelKind::Table;
            out.net.params[v].clear();
            out.net.multi[v].reset();
            out.net.spontaneous[v] = false;
        }
        out.per_vertex.push_back(std::move(res));
    }
    return out;
}

MultiProjectionResult project_multi(const std::vector<ActivationTable>& tables,
                                    double tol, int max_iter, bool full_support) {
    if (tables.empty()) throw std::invalid_argument("project_multi needs N >= 1 tables");
    const int k = tables.front().k;
    for (const auto& t : tables) {
        if (t.k != k) throw std::invalid_argument("tables must share one parent set");
        lattice::check_length(t.a.size(), t.k);
    }
    const int n_types = static_cast<int>(tables.size());
    const std::size_t table_len = lattice::table_size(k);

    std::vector<Mask> support;
    if (full_support) {
        for (Mask c = 1; c < table_len; ++c) support.push_back(c);
    } else {
        for (int i = 0; i < k; ++i) support.push_back(Mask{1} << i);
    }
    const std::size_t per_type = support.size();
    const std::size_t dim = n_types * per_type + 1;  // + shared slack

    auto expand = [&](const std::vector<double>& y, int n) {
        std::vector<double> b(table_len, 0.0);
        for (std::size_t j = 0; j < per_type; ++j) b[support[j]] = y[n * per_type + j];
        return b;
    };
    auto value = [&](const std::vector<double>& y) {
        double total = 0.0;
        for (int n = 0; n < n_types; ++n) {
            std::vector<double> r = lattice::apply_connection(expand(y, n), k);
            for (std::size_t s = 0; s < table_len; ++s) {
                double d = r[s] - tables[n].a[s];
                total += d * d;
            }
        }
        return total;
    };
    auto gradient = [&](const std::vector<double>& y) {
        std::vector<double> g(dim, 0.0);
        for (int n = 0; n < n_types; ++n) {
            std::vector<double> r = lattice::apply_connection(expand(y, n), k);
            for (std::size_t s = 0; s < table_len; ++s) r[s] -= tables[n].a[s];
            std::vector<double> gf = lattice::apply_connection(r, k);
            for (std::size_t j = 0; j < per_type; ++j)
                g[n * per_type + j] = 2.0 * gf[support[j]];
        }
        return g;  // slack coordinate has zero gradient
    };

    // Power iteration on the (block) Hessian in y-space.
    double lambda = 1.0;
    {
        std::vector<double> x(dim, 1.0 / static_cast<double>(dim));
        for (int round = 0; round < 50; ++round) {
            std::vector<double> hx(dim, 0.0);
            for (int n = 0; n < n_types; ++n) {
                std::vector<double> r = lattice::apply_connection(expand(x, n), k);
                std::vector<double> gf = lattice::apply_connection(r, k);
                for (std::size_t j = 0; j < per_type; ++j)
                    hx[n * per_type + j] = 2.0 * gf[support[j]];
            }
            double norm = std::sqrt(squared_norm(hx));
            if (norm <= 0.0) break;
            lambda = norm / std::max(std::sqrt(squared_norm(x)), 1e-300);
            for (double& v : hx) v /= norm;
            x = std::move(hx);
        }
        lambda *= 1.01;
    }

    std::vector<double> y(dim, 1.0 / static_cast<double>(dim));
    bool converged = false;
    int iters = solve_apg(
        y, value, gradient,
        [](std::vector<double> x) { return project_to_simplex(std::move(x)); },
        1.0 / std::max(lambda, 1e-12), tol, max_iter, converged);

    MultiProjectionResult res;
    res.iterations = iters;
    res.converged = converged;
    res.slack = y.back();
    res.objective = value(y);
    for (int n = 0; n < n_types; ++n) {
        std::vector<double> b = expand(y, n);
        std::vector<double> astar = lattice::apply_connection(b, k);
        for (double& v : astar) v = std::clamp(v, 0.0, 1.0);
        astar[0] = 0.0;
        res.b_star.push_back(std::move(b));
        res.a_star.push_back({k, std::move(astar)});
    }
    return res;
}

}  // namespace subdiff
