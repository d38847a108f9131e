#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "subdiff/lattice.hpp"

namespace subdiff {

// Activation probabilities of one vertex over all 2^k parent states.
struct ActivationTable {
    int k = 0;
    std::vector<double> a;  // length 2^k, entries in [0,1]

    std::size_t size() const { return a.size(); }
};

enum class ModelKind { Table, IC, LT, Plmmi };

// Per-parent, per-information-type weights of the partial linear
// multi-information model. w[parent][type], nonnegative, total <= 1.
struct MultiWeights {
    int n_types = 0;
    std::vector<std::vector<double>> w;
};

struct Network {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> parents;  // ordered; position = bit position
    std::vector<ActivationTable> tables;
    std::vector<ModelKind> kinds;
    std::vector<std::optional<MultiWeights>> multi;  // set iff kind == Plmmi
    std::vector<std::vector<double>> params;         // per-parent p/w for IC/LT
    std::vector<bool> spontaneous;                   // a[empty] > 0 at load time
    std::vector<int> topo_order;

    int vertex_count() const { return static_cast<int>(names.size()); }
    int vertex_id(const std::string& name) const;
};

// a[s] = 1 - prod over i in s of (1 - p_i)
ActivationTable ic_table(std::span<const double> p);
// a[s] = sum over i in s of w_i
ActivationTable lt_table(std::span<const double> w);

// The explicit coverage coefficients for which apply_connection reproduces
// the IC / LT tables: the independent-edge product measure, and the
// empty-plus-singletons assignment respectively.
std::vector<double> ic_coefficients(std::span<const double> p);
std::vector<double> lt_coefficients(std::span<const double> w);

ActivationTable table_from_entries(std::vector<double> a);

// Network file ingestion (JSON, format documented in README). Validates
// acyclicity, parent caps, table lengths and parameter constraints, expands
// every model spec into an ActivationTable and computes a topological order.
Network load_network(const std::string& json_text);
Network load_network_file(const std::string& path);
std::string serialize_network(const Network& net);

}  // namespace subdiff
