#include "doctest.h"

#include "qwalk/oracle.hpp"
#include "test_support.hpp"

using namespace qwalk;

TEST_CASE("path enumeration counts and trajectories") {
    const auto g = coin_from_name<ExactScalar>("grover");

    SUBCASE("record count is 2^n and positions step by one") {
        for (std::size_t n : {0, 1, 2, 5, 8}) {
            const auto records = enumerate_paths(g, n, 0, SojournConvention::midpoint);
            CHECK(records.size() == (std::size_t{1} << n));
            for (const auto& rec : records) {
                REQUIRE(rec.positions.size() == n + 1);
                CHECK(rec.positions.front() == 0);
                for (std::size_t j = 1; j <= n; ++j) {
                    CHECK(std::abs(rec.positions[j] - rec.positions[j - 1]) == 1);
                }
            }
        }
    }

    SUBCASE("time zero gives a single identity record") {
        const auto records = enumerate_paths(g, 0, 0, SojournConvention::midpoint);
        REQUIRE(records.size() == 1);
        CHECK(records[0].weight == Mat2<ExactScalar>::identity());
        CHECK(records[0].sojourn == 0);
    }

    SUBCASE("two-step paths: only the turning ones survive") {
        const auto records = enumerate_paths(g, 2, 0, SojournConvention::midpoint);
        REQUIRE(records.size() == 4);
        const auto rows = split_coin(g);
        for (const auto& rec : records) {
            if (rec.steps == "RL") {
                CHECK(rec.weight == rows.p * rows.q); // newest step leftmost
            } else if (rec.steps == "LR") {
                CHECK(rec.weight == rows.q * rows.p);
            } else {
                CHECK(rec.weight.is_zero());
            }
        }
    }

    SUBCASE("three-step pinned path") {
        const auto records = enumerate_paths(g, 3, 0, SojournConvention::midpoint);
        const auto rows = split_coin(g);
        bool seen = false;
        for (const auto& rec : records) {
            if (rec.steps != "LRL") continue;
            seen = true;
            CHECK(rec.positions == std::vector<int>{0, -1, 0, -1});
            CHECK(rec.weight == rows.p * rows.q * rows.p);
            CHECK(rec.weight == rows.p);
            CHECK(rec.sojourn == 0);
        }
        CHECK(seen);
    }

    SUBCASE("binomial endpoint counts") {
        const auto records = enumerate_paths(g, 6, 0, SojournConvention::midpoint);
        std::map<int, int> count;
        for (const auto& rec : records) ++count[rec.positions.back()];
        CHECK(count[6] == 1);
        CHECK(count[4] == 6);
        CHECK(count[2] == 15);
        CHECK(count[0] == 20);
    }

    SUBCASE("the time cap is enforced") {
        CHECK_THROWS_AS(enumerate_paths(g, 21, 0, SojournConvention::midpoint), ResourceLimit);
    }
}

TEST_CASE("sojourn interval counting rules") {
    CHECK(sojourn_increment(SojournConvention::midpoint, 0, 1) == 1);
    CHECK(sojourn_increment(SojournConvention::midpoint, 1, 0) == 1);
    CHECK(sojourn_increment(SojournConvention::midpoint, 0, -1) == 0);
    CHECK(sojourn_increment(SojournConvention::midpoint, -1, 0) == 0);
    CHECK(sojourn_increment(SojournConvention::endpoint, 0, 1) == 1);
    CHECK(sojourn_increment(SojournConvention::endpoint, 1, 0) == 0);
    CHECK(sojourn_increment(SojournConvention::endpoint, 1, 2) == 1);
}

TEST_CASE("oracle aggregation at small times") {
    const auto g = coin_from_name<ExactScalar>("grover");
    const auto rows = split_coin(g);

    SUBCASE("gamma slice at n = 2") {
        const auto tables = oracle_tables(g, 2, SojournConvention::midpoint);
        REQUIRE(tables.gamma.size() == 2);
        CHECK(tables.gamma.at(2) == rows.p * rows.q);
        CHECK(tables.gamma.at(0) == rows.q * rows.p);
    }

    SUBCASE("xi slice at n = 4 is the identity at the origin") {
        const auto tables = oracle_tables(g, 4, SojournConvention::midpoint);
        REQUIRE(tables.xi.size() == 1);
        CHECK(tables.xi.at(0) == Mat2<ExactScalar>::identity());
    }

    SUBCASE("psi slice at n = 1") {
        const auto tables = oracle_tables(g, 1, SojournConvention::midpoint);
        CHECK(tables.psi.at({1, 1}) == rows.q);
        CHECK(tables.psi.at({-1, 0}) == rows.p);
        CHECK(tables.psi.size() == 2);
    }

    SUBCASE("excursion slices at n = 2") {
        const auto tables = oracle_tables(g, 2, SojournConvention::midpoint);
        CHECK(tables.f_plus == rows.p * rows.q);
        CHECK(tables.f_minus == rows.q * rows.p);
    }

    SUBCASE("endpoint convention reclassifies the turning path") {
        const auto tables = oracle_tables(g, 2, SojournConvention::endpoint);
        // R then L visits 1 then 0: under the endpoint rule only the first
        // interval (ending at x=1) counts, so the sojourn count drops to 1.
        CHECK(tables.gamma.at(1) == rows.p * rows.q);
        CHECK(tables.gamma.at(0) == rows.q * rows.p);
        CHECK(tables.gamma.count(2) == 0);
    }
}

TEST_CASE("oracle-level unitarity: endpoint-grouped squared norms sum to one") {
    const Vec2<ExactScalar> state(ExactScalar(), ExactScalar::imaginary_unit());
    for (const char* name : {"grover", "hadamard", "identity"}) {
        const auto coin = coin_from_name<ExactScalar>(name);
        for (std::size_t n : {1, 2, 3, 6}) {
            const auto tables = oracle_tables(coin, n, SojournConvention::midpoint);
            ExactScalar total;
            for (const auto& [x, w] : tables.xi) {
                (void)x;
                total += (w * state).norm2();
            }
            CHECK(total == ExactScalar(1));
        }
    }
}
