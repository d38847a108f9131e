#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "subdiff/project.hpp"

using namespace subdiff;

TEST_CASE("simplex projection") {
    auto p = project_to_simplex({0.5, 0.5});
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    p = project_to_simplex({2.0, 0.0});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
    p = project_to_simplex({-1.0, -2.0});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
    // output is always on the simplex
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> unit(-3.0, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> v(8);
        for (double& x : v) x = unit(gen);
        auto q = project_to_simplex(v);
        double sum = 0.0;
        for (double x : q) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("feasible tables project to themselves") {
    ActivationTable a{2, {0.0, 0.5, 0.5, 0.75}};
    auto res = project_vertex(a);
    CHECK(res.objective == 0.0);
    CHECK(res.iterations == 0);
    CHECK(res.a_star.a == a.a);
}

TEST_CASE("conjunctive table projects to the linear third-split") {
    auto res = project_vertex({2, {0.0, 0.0, 0.0, 1.0}}, 1e-10);
    REQUIRE(res.converged);
    CHECK(res.a_star.a[0] == doctest::Approx(0.0));
    CHECK(res.a_star.a[1] == doctest::Approx(1.0 / 3).epsilon(1e-6));
    CHECK(res.a_star.a[2] == doctest::Approx(1.0 / 3).epsilon(1e-6));
    CHECK(res.a_star.a[3] == doctest::Approx(2.0 / 3).epsilon(1e-6));
    CHECK(res.objective == doctest::Approx(1.0 / 3).epsilon(1e-6));
}

TEST_CASE("k=1 projection zeroes the spontaneous entry and keeps the rest") {
    auto res = project_vertex({1, {0.2, 0.9}});
    CHECK(res.a_star.a[0] == doctest::Approx(0.0));
    CHECK(res.a_star.a[1] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("idempotence") {
    std::mt19937_64 gen(67);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tol = 1e-8;
    for (int rep = 0; rep < 10; ++rep) {
        int k = 2 + rep % 3;
        std::vector<double> a(lattice::table_size(k));
        for (double& x : a) x = unit(gen);
        a[0] = 0.0;
        auto once = project_vertex({k, a}, tol);
        auto twice = project_vertex(once.a_star, tol);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(twice.a_star.a[i] - once.a_star.a[i]) <= 10 * 1e-7);
    }
}

TEST_CASE("variational inequality against random feasible points") {
    std::mt19937_64 gen(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int k = 3;
    std::vector<double> a(lattice::table_size(k));
    for (double& x : a) x = unit(gen);
    a[0] = 0.0;
    auto res = project_vertex({k, a}, 1e-10);
    double dist_star = std::sqrt(res.objective);
    for (int rep = 0; rep < 100; ++rep) {
        auto b = oracles::random_simplex_point(lattice::table_size(k), gen);
        auto aprime = lattice::apply_connection(b, k);
        double dist = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dist += (a[i] - aprime[i]) * (a[i] - aprime[i]);
        CHECK(dist_star <= std::sqrt(dist) + 10 * 1e-8);
    }
}

TEST_CASE("projection output is always certifiable") {
    std::mt19937_64 gen(73);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        int k = 1 + rep % 5;
        std::vector<double> a(lattice::table_size(k));
        for (double& x : a) x = unit(gen);
        a[0] = 0.0;
        auto res = project_vertex({k, a});
        CHECK(certify_vertex(res.a_star, 1e-6).feasible);
    }
}

TEST_CASE("solver objective sequence is non-increasing") {
    auto res = project_vertex({3, {0.0, 0.1, 0.2, 0.9, 0.1, 0.9, 0.9, 1.0}});
    REQUIRE(res.objective_history.size() >= 2);
    for (std::size_t i = 1; i < res.objective_history.size(); ++i)
        CHECK(res.objective_history[i] <= res.objective_history[i - 1] + 1e-15);
}

TEST_CASE("project_model") {
    std::mt19937_64 gen(79);
    SUBCASE("all-IC network is untouched") {
        Network net = oracles::random_ic_network({8, 0.5, 3}, gen);
        auto proj = project_model(net);
        for (int v = 0; v < net.vertex_count(); ++v)
            CHECK(proj.net.tables[v].a == net.tables[v].a);
    }
    SUBCASE("conjunctive vertex is replaced, rest identical") {
        const std::string doc = R"({
          "vertices": ["a", "b", "v", "w"],
          "edges": [["a", "v"], ["b", "v"], ["v", "w"]],
          "models": {"v": {"kind": "table", "a": [0, 0, 0, 1]},
                     "w": {"kind": "ic", "p": {"v": 0.5}}}
        })";
        Network net = load_network(doc);
        auto proj = project_model(net, 1e-10);
        int v = net.vertex_id("v");
        CHECK(proj.net.tables[v].a[1] == doctest::Approx(1.0 / 3).epsilon(1e-6));
        CHECK(proj.net.tables[v].a[3] == doctest::Approx(2.0 / 3).epsilon(1e-6));
        CHECK(proj.net.tables[net.vertex_id("w")].a == net.tables[net.vertex_id("w")].a);
        CHECK(certify_model(proj.net, 1e-6).feasible);
    }
    SUBCASE("empty network") {
        Network net = load_network(R"({"vertices": [], "edges": [], "models": {}})");
        auto proj = project_model(net);
        CHECK(proj.net.vertex_count() == 0);
        CHECK(proj.converged);
    }
}

TEST_CASE("project_multi") {
    SUBCASE("linear table is already representable") {
        auto lt = lt_table(std::vector<double>{0.25, 0.25});
        auto res = project_multi({lt});
        REQUIRE(res.converged);
        CHECK(res.b_star[0][1] == doctest::Approx(0.25).epsilon(1e-5));
        CHECK(res.b_star[0][2] == doctest::Approx(0.25).epsilon(1e-5));
        for (std::size_t i = 0; i < lt.a.size(); ++i)
            CHECK(res.a_star[0].a[i] == doctest::Approx(lt.a[i]).epsilon(1e-5));
    }
    SUBCASE("two identical LT types split the budget with zero slack") {
        auto lt = lt_table(std::vector<double>{0.25, 0.25});
        auto res = project_multi({lt, lt});
        REQUIRE(res.converged);
        for (int n = 0; n < 2; ++n) {
            CHECK(res.b_star[n][1] == doctest::Approx(0.25).epsilon(1e-4));
            CHECK(res.b_star[n][2] == doctest::Approx(0.25).epsilon(1e-4));
        }
        CHECK(res.slack == doctest::Approx(0.0).epsilon(1e-5));
    }
    SUBCASE("conjunctive table under singleton support") {
        auto res = project_multi({ActivationTable{2, {0.0, 0.0, 0.0, 1.0}}});
        REQUIRE(res.converged);
        CHECK(res.a_star[0].a[1] == doctest::Approx(1.0 / 3).epsilon(1e-5));
        CHECK(res.a_star[0].a[2] == doctest::Approx(1.0 / 3).epsilon(1e-5));
        CHECK(res.a_star[0].a[3] == doctest::Approx(2.0 / 3).epsilon(1e-5));
    }
    SUBCASE("full support with N=1 reproduces project_vertex") {
        std::mt19937_64 gen(83);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int rep = 0; rep < 5; ++rep) {
            int k = 2 + rep % 2;
            std::vector<double> a(lattice::table_size(k));
            for (double& x : a) x = unit(gen);
            a[0] = 0.0;
            ActivationTable t{k, a};
            auto single = project_vertex(t, 1e-9);
            auto multi = project_multi({t}, 1e-9, kDefaultProjectionMaxIter, true);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(std::abs(multi.a_star[0].a[i] - single.a_star.a[i]) <= 1e-5);
        }
    }
}
