#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "subdiff/model.hpp"

using namespace subdiff;

TEST_CASE("ic_table") {
    SUBCASE("two half edges") {
        auto t = ic_table(std::vector<double>{0.5, 0.5});
        CHECK(t.a == std::vector<double>{0.0, 0.5, 0.5, 0.75});
    }
    SUBCASE("certain edge") {
        auto t = ic_table(std::vector<double>{1.0});
        CHECK(t.a == std::vector<double>{0.0, 1.0});
    }
    SUBCASE("no parents") {
        auto t = ic_table(std::vector<double>{});
        CHECK(t.a == std::vector<double>{0.0});
    }
    SUBCASE("rejects out-of-range probability") {
        CHECK_THROWS_AS(ic_table(std::vector<double>{1.5}), std::invalid_argument);
        CHECK_THROWS_AS(ic_table(std::vector<double>{-0.1}), std::invalid_argument);
    }
}

TEST_CASE("lt_table") {
    SUBCASE("direct sums") {
        auto t = lt_table(std::vector<double>{0.3, 0.4});
        CHECK(t.a[0] == doctest::Approx(0.0));
        CHECK(t.a[1] == doctest::Approx(0.3));
        CHECK(t.a[2] == doctest::Approx(0.4));
        CHECK(t.a[3] == doctest::Approx(0.7));
    }
    SUBCASE("empty and saturated") {
        CHECK(lt_table(std::vector<double>{}).a == std::vector<double>{0.0});
        CHECK(lt_table(std::vector<double>{1.0}).a == std::vector<double>{0.0, 1.0});
    }
    SUBCASE("rejects bad weights") {
        CHECK_THROWS_AS(lt_table(std::vector<double>{-0.1}), std::invalid_argument);
        CHECK_THROWS_AS(lt_table(std::vector<double>{0.7, 0.5}), std::invalid_argument);
    }
}

TEST_CASE("ic_coefficients") {
    SUBCASE("product expansion") {
        auto b = ic_coefficients(std::vector<double>{0.5, 0.5});
        CHECK(b == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    }
    SUBCASE("degenerate endpoints") {
        auto zero = ic_coefficients(std::vector<double>{0.0, 0.0, 0.0});
        CHECK(zero[0] == 1.0);
        for (int c = 1; c < 8; ++c) CHECK(zero[c] == 0.0);
        auto one = ic_coefficients(std::vector<double>{1.0, 1.0});
        CHECK(one == std::vector<double>{0.0, 0.0, 0.0, 1.0});
    }
}

TEST_CASE("lt_coefficients") {
    auto b = lt_coefficients(std::vector<double>{0.3, 0.4});
    CHECK(b[0] == doctest::Approx(0.3));
    CHECK(b[1] == doctest::Approx(0.3));
    CHECK(b[2] == doctest::Approx(0.4));
    CHECK(b[3] == 0.0);
    CHECK(lt_coefficients(std::vector<double>{}) == std::vector<double>{1.0});
    CHECK(lt_coefficients(std::vector<double>{0.5, 0.5})[0] == doctest::Approx(0.0));
}

TEST_CASE("coefficients reproduce the tables through the connection operator") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        int k = 1 + static_cast<int>(unit(gen) * 7.99);
        std::vector<double> p(k);
        for (double& x : p) x = unit(gen);
        auto b = ic_coefficients(p);
        double sum = 0.0;
        for (double x : b) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        auto recon = lattice::apply_connection(b, k);
        auto table = ic_table(p);
        for (std::size_t s = 0; s < recon.size(); ++s)
            CHECK(std::abs(recon[s] - table.a[s]) <= 1e-12);

        std::vector<double> w(k);
        double budget = unit(gen);
        for (double& x : w) x = budget * unit(gen) / k;
        auto bl = lt_coefficients(w);
        sum = 0.0;
        for (std::size_t c = 0; c < bl.size(); ++c) {
            sum += bl[c];
            if (c != 0 && std::popcount(static_cast<unsigned>(c)) > 1) CHECK(bl[c] == 0.0);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        auto reconl = lattice::apply_connection(bl, k);
        auto tablel = lt_table(w);
        for (std::size_t s = 0; s < reconl.size(); ++s)
            CHECK(std::abs(reconl[s] - tablel.a[s]) <= 1e-12);
    }
}

TEST_CASE("load_network basics") {
    const std::string doc = R"({
      "vertices": ["u", "v"],
      "edges": [["u", "v"]],
      "models": {"v": {"kind": "ic", "p": {"u": 0.5}}}
    })";
    Network net = load_network(doc);
    REQUIRE(net.vertex_count() == 2);
    CHECK(net.tables[net.vertex_id("u")].a == std::vector<double>{0.0});
    CHECK(net.tables[net.vertex_id("v")].a == std::vector<double>{0.0, 0.5});
    CHECK(net.topo_order.front() == net.vertex_id("u"));
    CHECK(net.parents[net.vertex_id("v")] == std::vector<int>{net.vertex_id("u")});
}

TEST_CASE("load_network rejects bad input") {
    SUBCASE("cycle") {
        const std::string doc = R"({
          "vertices": ["u", "v"],
          "edges": [["u", "v"], ["v", "u"]],
          "models": {"u": {"kind": "ic", "p": {"v": 0.5}},
                     "v": {"kind": "ic", "p": {"u": 0.5}}}
        })";
        CHECK_THROWS_WITH_AS(load_network(doc), doctest::Contains("cycle"),
                             std::invalid_argument);
    }
    SUBCASE("lt weights exceeding 1") {
        const std::string doc = R"({
          "vertices": ["a", "b", "v"],
          "edges": [["a", "v"], ["b", "v"]],
          "models": {"v": {"kind": "lt", "w": {"a": 0.7, "b": 0.5}}}
        })";
        CHECK_THROWS_WITH_AS(load_network(doc), doctest::Contains("exceed"),
                             std::invalid_argument);
    }
    SUBCASE("unknown model kind") {
        const std::string doc = R"({
          "vertices": ["u", "v"],
          "edges": [["u", "v"]],
          "models": {"v": {"kind": "voter", "p": {"u": 0.5}}}
        })";
        CHECK_THROWS_WITH_AS(load_network(doc), doctest::Contains("unknown model kind"),
                             std::invalid_argument);
    }
    SUBCASE("table length mismatch") {
        const std::string doc = R"({
          "vertices": ["u", "v"],
          "edges": [["u", "v"]],
          "models": {"v": {"kind": "table", "a": [0, 0.1, 0.2, 0.3]}}
        })";
        CHECK_THROWS_AS(load_network(doc), std::invalid_argument);
    }
    SUBCASE("missing parent parameter") {
        const std::string doc = R"({
          "vertices": ["u", "v"],
          "edges": [["u", "v"]],
          "models": {"v": {"kind": "ic", "p": {}}}
        })";
        CHECK_THROWS_AS(load_network(doc), std::invalid_argument);
    }
    SUBCASE("malformed json") {
        CHECK_THROWS_AS(load_network("{nope"), std::invalid_argument);
    }
}

TEST_CASE("spontaneous tables are flagged but load") {
    const std::string doc = R"({
      "vertices": ["u", "v"],
      "edges": [["u", "v"]],
      "models": {"v": {"kind": "table", "a": [0.1, 0.9]}}
    })";
    Network net = load_network(doc);
    CHECK(net.spontaneous[net.vertex_id("v")]);
    CHECK_FALSE(net.spontaneous[net.vertex_id("u")]);
}

TEST_CASE("serialize round trip") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 5; ++rep) {
        Network net = oracles::random_ic_network({8, 0.5, 3}, gen);
        Network again = load_network(serialize_network(net));
        REQUIRE(again.vertex_count() == net.vertex_count());
        CHECK(again.names == net.names);
        CHECK(again.parents == net.parents);
        CHECK(again.topo_order == net.topo_order);
        for (int v = 0; v < net.vertex_count(); ++v) {
            CHECK(again.kinds[v] == net.kinds[v]);
            CHECK(again.tables[v].a == net.tables[v].a);
        }
    }
    // plmmi round trip
    const std::string doc = R"({
      "vertices": ["a", "b", "v"],
      "edges": [["a", "v"], ["b", "v"]],
      "models": {"v": {"kind": "plmmi", "n_types": 2,
                       "w": {"a": [0.2, 0.1], "b": [0.3, 0.2]}}}
    })";
    Network net = load_network(doc);
    Network again = load_network(serialize_network(net));
    int v = net.vertex_id("v");
    REQUIRE(again.multi[v].has_value());
    CHECK(again.multi[v]->n_types == 2);
    CHECK(again.multi[v]->w == net.multi[v]->w);
    // expanded single-information table sums the per-type weights
    CHECK(net.tables[v].a[3] == doctest::Approx(0.8));
}

TEST_CASE("plmmi weight validation") {
    const std::string doc = R"({
      "vertices": ["a", "b", "v"],
      "edges": [["a", "v"], ["b", "v"]],
      "models": {"v": {"kind": "plmmi", "n_types": 2,
                       "w": {"a": [0.5, 0.3], "b": [0.3, 0.2]}}}
    })";
    CHECK_THROWS_WITH_AS(load_network(doc), doctest::Contains("exceed"),
                         std::invalid_argument);
}
