#include "subdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace subdiff {

using json = nlohmann::json;
using lattice::Mask;

int Network::vertex_id(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("unknown vertex id: " + name);
    return it->second;
}

ActivationTable ic_table(std::span<const double> p) {
    const int k = static_cast<int>(p.size());
    lattice::check_parent_count(k);
    for (double pi : p)
        if (!(pi >= 0.0 && pi <= 1.0))
            throw std::invalid_argument("ic probability out of [0,1]");
    std::vector<double> a(lattice::table_size(k));
    for (Mask s = 0; s < a.size(); ++s) {
        double miss = 1.0;
        for (int i = 0; i < k; ++i)
            if (s & (Mask{1} << i)) miss *= 1.0 - p[i];
        a[s] = 1.0 - miss;
    }
    return {k, std::move(a)};
}

ActivationTable lt_table(std::span<const double> w) {
    const int k = static_cast<int>(w.size());
    lattice::check_parent_count(k);
    double total = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw std::invalid_argument("negative lt weight");
        total += wi;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("lt weights exceed 1");
    std::vector<double> a(lattice::table_size(k));
    for (Mask s = 0; s < a.size(); ++s) {
        double sum = 0.0;
        for (int i = 0; i < k; ++i)
            if (s & (Mask{1} << i)) sum += w[i];
        a[s] = std::min(sum, 1.0);
    }
    return {k, std::move(a)};
}

std::vector<double> ic_coefficients(std::span<const double> p) {
    const int k = static_cast<int>(p.size());
    lattice::check_parent_count(k);
    for (double pi : p)
        if (!(pi >= 0.0 && pi <= 1.0))
            throw std::invalid_argument("ic probability out of [0,1]");
    std::vector<double> b(lattice::table_size(k));
    for (Mask c = 0; c < b.size(); ++c) {
        double prod = 1.0;
        for (int i = 0; i < k; ++i)
            prod *= (c & (Mask{1} << i)) ? p[i] : 1.0 - p[i];
        b[c] = prod;
    }
    return b;
}

std::vector<double> lt_coefficients(std::span<const double> w) {
    const int k = static_cast<int>(w.size());
    lattice::check_parent_count(k);
    double total = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw std::invalid_argument("negative lt weight");
        total += wi;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("lt weights exceed 1");
    std::vector<double> b(lattice::table_size(k), 0.0);
    b[0] = 1.0 - total;
    for (int i = 0; i < k; ++i) b[Mask{1} << i] = w[i];
    return b;
}

ActivationTable table_from_entries(std::vector<double> a) {
    if (a.empty() || (a.size() & (a.size() - 1)) != 0)
        throw std::invalid_argument("table length must be a power of two");
    int k = 0;
    while (lattice::table_size(k) < a.size()) ++k;
    lattice::check_parent_count(k);
    for (double v : a)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("table entry out of [0,1]");
    return {k, std::move(a)};
}

namespace {

std::vector<int> topological_order(const std::vector<std::vector<int>>& parents) {
    const int n = static_cast<int>(parents.size());
    std::vector<int> remaining(n, 0);
    std::vector<std::vector<int>> children(n);
    for (int v = 0; v < n; ++v) {
        remaining[v] = static_cast<int>(parents[v].size());
        for (int u : parents[v]) children[u].push_back(v);
    }
    std::deque<int> ready;
    for (int v = 0; v < n; ++v)
        if (remaining[v] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int c : children[v])
            if (--remaining[c] == 0) ready.push_back(c);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("cycle detected in edge list");
    return order;
}

std::vector<double> per_parent_values(const json& dict, const Network& net, int v,
                                      const char* what) {
    std::vector<double> out;
    out.reserve(net.parents[v].size());
    for (int u : net.parents[v]) {
        const std::string& uname = net.names[u];
        if (!dict.contains(uname))
            throw std::invalid_argument("vertex '" + net.names[v] + "': missing " + what +
                                        " for parent '" + uname + "'");
        out.push_back(dict.at(uname).get<double>());
    }
    if (dict.size() != out.size())
        throw std::invalid_argument("vertex '" + net.names[v] + "': " + what +
                                    " given for a non-parent");
    return out;
}

}  // namespace

Network load_network(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed network file: ") + e.what());
    }

    Network net;
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw std::invalid_argument("network file missing 'vertices' array");
    for (const auto& v : doc["vertices"]) {
        std::string name = v.get<std::string>();
        if (net.index.count(name))
            throw std::invalid_argument("duplicate vertex id: " + name);
        net.index[name] = static_cast<int>(net.names.size());
        net.names.push_back(std::move(name));
    }
    const int n = net.vertex_count();
    net.parents.assign(n, {});

    if (doc.contains("edges")) {
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("edge must be a [from, to] pair");
            int u = net.vertex_id(e[0].get<std::string>());
            int v = net.vertex_id(e[1].get<std::string>());
            if (std::find(net.parents[v].begin(), net.parents[v].end(), u) !=
                net.parents[v].end())
                throw std::invalid_argument("duplicate edge into '" + net.names[v] + "'");
            net.parents[v].push_back(u);
        }
    }
    for (int v = 0; v < n; ++v)
        if (static_cast<int>(net.parents[v].size()) > lattice::kMaxParents)
            throw std::invalid_argument("vertex '" + net.names[v] + "' has more than " +
                                        std::to_string(lattice::kMaxParents) + " parents");

    net.topo_order = topological_order(net.parents);

    net.tables.resize(n);
    net.kinds.assign(n, ModelKind::Table);
    net.multi.assign(n, std::nullopt);
    net.params.assign(n, {});
    net.spontaneous.assign(n, false);

    const json models = doc.value("models", json::object());
    for (auto it = models.begin(); it != models.end(); ++it) net.vertex_id(it.key());

    for (int v = 0; v < n; ++v) {
        const int k = static_cast<int>(net.parents[v].size());
        if (!models.contains(net.names[v])) {
            if (k != 0)
                throw std::invalid_argument("vertex '" + net.names[v] +
                                            "' has parents but no model");
            net.tables[v] = {0, {0.0}};
            continue;
        }
        const json& spec = models.at(net.names[v]);
        const std::string kind = spec.value("kind", "");
        try {
            if (kind == "ic") {
                net.kinds[v] = ModelKind::IC;
                net.params[v] = per_parent_values(spec.at("p"), net, v, "probability");
                net.tables[v] = ic_table(net.params[v]);
            } else if (kind == "lt") {
                net.kinds[v] = ModelKind::LT;
                net.params[v] = per_parent_values(spec.at("w"), net, v, "weight");
                net.tables[v] = lt_table(net.params[v]);
            } else if (kind == "table") {
                net.kinds[v] = ModelKind::Table;
                net.tables[v] = table_from_entries(spec.at("a").get<std::vector<double>>());
                if (net.tables[v].k != k)
                    throw std::invalid_argument("table length does not match parent count");
            } else if (kind == "plmmi") {
                net.kinds[v] = ModelKind::Plmmi;
                MultiWeights mw;
                mw.n_types = spec.at("n_types").get<int>();
                if (mw.n_types < 1) throw std::invalid_argument("n_types must be >= 1");
                const json& wdict = spec.at("w");
                double total = 0.0;
                std::vector<double> combined;
                for (int u : net.parents[v]) {
                    const std::string& uname = net.names[u];
                    if (!wdict.contains(uname))
                        throw std::invalid_argument("missing plmmi weights for parent '" +
                                                    uname + "'");
                    auto wu = wdict.at(uname).get<std::vector<double>>();
                    if (static_cast<int>(wu.size()) != mw.n_types)
                        throw std::invalid_argument("plmmi weight list length != n_types");
                    double wsum = 0.0;
                    for (double x : wu) {
                        if (x < 0.0) throw std::invalid_argument("negative plmmi weight");
                        wsum += x;
                    }
                    combined.push_back(wsum);
                    total += wsum;
                    mw.w.push_back(std::move(wu));
                }
                if (wdict.size() != net.parents[v].size())
                    throw std::invalid_argument("plmmi weight given for a non-parent");
                if (total > 1.0 + 1e-12)
                    throw std::invalid_argument("plmmi weights exceed 1");
                net.multi[v] = std::move(mw);
                net.tables[v] = lt_table(combined);
            } else {
                throw std::invalid_argument("unknown model kind '" + kind + "'");
            }
        } catch (const json::exception& e) {
            throw std::invalid_argument("vertex '" + net.names[v] +
                                        "': malformed model spec: " + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("vertex '" + net.names[v] + "': " + e.what());
        }
        if (net.tables[v].a[0] > 0.0) {
            net.spontaneous[v] = true;
            std::cerr << "warning: vertex '" << net.names[v]
                      << "' has spontaneous activation (a[empty] > 0); "
                         "it will certify infeasible\n";
        }
    }
    return net;
}

Network load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_network(buf.str());
}

std::string serialize_network(const Network& net) {
    json doc;
    doc["vertices"] = net.names;
    json edges = json::array();
    for (int v = 0; v < net.vertex_count(); ++v)
        for (int u : net.parents[v]) edges.push_back({net.names[u], net.names[v]});
    doc["edges"] = std::move(edges);
    json models = json::object();
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (net.parents[v].empty() && net.kinds[v] == ModelKind::Table &&
            net.tables[v].a == std::vector<double>{0.0})
            continue;
        json spec;
        switch (net.kinds[v]) {
            case ModelKind::IC: {
                spec["kind"] = "ic";
                json p = json::object();
                for (std::size_t i = 0; i < net.parents[v].size(); ++i)
                    p[net.names[net.parents[v][i]]] = net.params[v][i];
                spec["p"] = std::move(p);
                break;
            }
            case ModelKind::LT: {
                spec["kind"] = "lt";
                json w = json::object();
                for (std::size_t i = 0; i < net.parents[v].size(); ++i)
                    w[net.names[net.parents[v][i]]] = net.params[v][i];
                spec["w"] = std::move(w);
                break;
            }
            case ModelKind::Plmmi: {
                spec["kind"] = "plmmi";
                spec["n_types"] = net.multi[v]->n_types;
                json w = json::object();
                for (std::size_t i = 0; i < net.parents[v].size(); ++i)
                    w[net.names[net.parents[v][i]]] = net.multi[v]->w[i];
                spec["w"] = std::move(w);
                break;
            }
            case ModelKind::Table:
                spec["kind"] = "table";
                spec["a"] = net.tables[v].a;
                break;
        }
        models[net.names[v]] = std::move(spec);
    }
    doc["models"] = std::move(models);
    return doc.dump(2);
}

}  // namespace subdiff
