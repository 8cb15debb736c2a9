#include "doctest.h"

#include "qwalk/series.hpp"
#include "test_support.hpp"

using namespace qwalk;

namespace {

using ES = BiSeries<ExactScalar>;
using EM = BiSeries<Mat2<ExactScalar>>;

template <class S>
Mat2<S> unit_entry(int r, int c) {
    Mat2<S> m;
    m.at(r, c) = scalar_ops<S>::one();
    return m;
}

ES random_series(testing::Rng& rng, int nz, int nt, int terms) {
    ES s(nz, nt);
    for (int i = 0; i < terms; ++i) {
        s.set(static_cast<int>(rng.integer(0, nz)), static_cast<int>(rng.integer(0, nt)),
              rng.exact_scalar());
    }
    return s;
}

} // namespace

TEST_CASE("series storage honors truncation") {
    ES s(4, 3);
    s.set(1, 0, ExactScalar(1));
    CHECK(s.at(1, 0) == ExactScalar(1));
    CHECK(s.at(2, 2).is_zero());
    CHECK_THROWS_AS(s.set(5, 0, ExactScalar(1)), TruncationOverflow);
    CHECK_THROWS_AS(s.set(0, 4, ExactScalar(1)), TruncationOverflow);
    s.set(1, 0, ExactScalar()); // zeroing removes storage
    CHECK(s.is_zero());
}

TEST_CASE("series arithmetic matches a naive dense convolution") {
    testing::Rng rng(1912);
    for (int trial = 0; trial < 30; ++trial) {
        const int nz = 16, nt = 16;
        const ES a = random_series(rng, nz, nt, 24);
        const ES b = random_series(rng, nz, nt, 24);
        const ES prod = a * b;
        for (int i = 0; i <= nz; ++i) {
            for (int j = 0; j <= nt; ++j) {
                ExactScalar want;
                for (int i1 = 0; i1 <= i; ++i1) {
                    for (int j1 = 0; j1 <= j; ++j1) {
                        want += a.at(i1, j1) * b.at(i - i1, j - j1);
                    }
                }
                CHECK(prod.at(i, j) == want);
            }
        }
        const ES sum = a + b;
        for (const auto& [ij, v] : sum.coefficients()) {
            CHECK(v == a.at(ij.first, ij.second) + b.at(ij.first, ij.second));
        }
    }
}

TEST_CASE("matrix series identity element and zero annihilation") {
    const EM id = EM::one(8, 8);
    EM x(8, 8);
    x.set(2, 2, unit_entry<ExactScalar>(0, 0));
    x.set(2, 0, unit_entry<ExactScalar>(1, 1));
    CHECK(id * x == x);
    CHECK(x * id == x);
    const EM zero(8, 8);
    CHECK((x * zero).is_zero());
    CHECK((zero * x).is_zero());
}

TEST_CASE("table import starts the time sums at one") {
    std::map<std::pair<std::size_t, int>, ExactScalar> table;
    table[{0, 0}] = ExactScalar(5); // dropped: time-zero row
    table[{1, 0}] = ExactScalar(1);
    const ES s = series_from_table(table, 8, 8);
    CHECK(s.at(1, 0) == ExactScalar(1));
    CHECK(s.at(0, 0).is_zero());

    std::map<std::pair<std::size_t, int>, ExactScalar> big;
    big[{9, 0}] = ExactScalar(1);
    CHECK_THROWS_AS(series_from_table(big, 8, 8), TruncationOverflow);
    const std::map<std::pair<std::size_t, int>, ExactScalar> empty;
    CHECK(series_from_table(empty, 8, 8).is_zero());
}

TEST_CASE("symmetrization kills odd degrees and quadruples the rest") {
    SUBCASE("pinned small cases") {
        ES s(4, 4);
        s.set(1, 1, ExactScalar(1));
        CHECK(symmetrize(s).is_zero());

        ES s2(4, 4);
        s2.set(2, 2, ExactScalar(1));
        const ES sym2 = symmetrize(s2);
        CHECK(sym2.at(2, 2) == ExactScalar(4));
        CHECK(sym2.coefficients().size() == 1);

        ES s3(4, 4);
        s3.set(1, 0, ExactScalar(1));
        s3.set(2, 0, ExactScalar(1));
        const ES sym3 = symmetrize(s3);
        CHECK(sym3.at(2, 0) == ExactScalar(4));
        CHECK(sym3.coefficients().size() == 1);
    }
    SUBCASE("random series") {
        testing::Rng rng(55);
        for (int trial = 0; trial < 100; ++trial) {
            const ES s = random_series(rng, 12, 12, 20);
            const ES sym = symmetrize(s);
            for (const auto& [ij, v] : sym.coefficients()) {
                CHECK(ij.first % 2 == 0);
                CHECK(ij.second % 2 == 0);
                CHECK(v == s.at(ij.first, ij.second) * ExactScalar(4));
            }
            for (const auto& [ij, v] : s.coefficients()) {
                (void)v;
                if (ij.first % 2 == 0 && ij.second % 2 == 0) {
                    CHECK(sym.at(ij.first, ij.second) == s.at(ij.first, ij.second) * ExactScalar(4));
                }
            }
        }
    }
}

TEST_CASE("excursion series for the exchange coin is the two-term X") {
    const auto g = coin_from_name<ExactScalar>("grover");
    const auto exc = first_return_excursions(g, 20);
    const EM x = build_X(exc, 20, 20);
    CHECK(x.coefficients().size() == 2);
    CHECK(x.at(2, 2) == unit_entry<ExactScalar>(0, 0));
    CHECK(x.at(2, 0) == unit_entry<ExactScalar>(1, 1));
}

TEST_CASE("formal inversion: geometric series identities") {
    SUBCASE("diagonal two-term input gives the two geometric tails") {
        const auto g = coin_from_name<ExactScalar>("grover");
        const auto exc = first_return_excursions(g, 40);
        const EM x = build_X(exc, 40, 40);
        const EM y = neumann_inverse_times(x);
        for (int n = 1; 2 * n <= 40; ++n) {
            CHECK(y.at(2 * n, 2 * n) == unit_entry<ExactScalar>(0, 0));
            CHECK(y.at(2 * n, 0) == unit_entry<ExactScalar>(1, 1));
        }
        std::size_t expected = 0;
        for (const auto& [ij, v] : y.coefficients()) {
            (void)v;
            const bool diag = ij.first == ij.second && ij.first % 2 == 0;
            const bool left = ij.second == 0 && ij.first % 2 == 0;
            CHECK((diag || left));
            ++expected;
        }
        CHECK(expected == 40);
    }
    SUBCASE("scalar-style input z*I") {
        EM x(10, 10);
        x.set(1, 0, Mat2<ExactScalar>::identity());
        const EM y = neumann_inverse_times(x);
        for (int n = 1; n <= 10; ++n) {
            CHECK(y.at(n, 0) == Mat2<ExactScalar>::identity());
        }
    }
    SUBCASE("zero input returns zero") {
        CHECK(neumann_inverse_times(EM(6, 6)).is_zero());
    }
    SUBCASE("nonzero constant term is rejected") {
        EM x(6, 6);
        x.set(0, 0, unit_entry<ExactScalar>(0, 1));
        CHECK_THROWS_AS(neumann_inverse_times(x), NonNilpotentConstantTerm);
    }
    SUBCASE("defining identity holds for random nilpotent inputs") {
        testing::Rng rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            EM x(10, 10);
            for (int t = 0; t < 6; ++t) {
                const int i = static_cast<int>(rng.integer(0, 10));
                const int j = static_cast<int>(rng.integer(0, 10));
                if (i == 0 && j == 0) continue;
                x.set(i, j, rng.exact_mat2());
            }
            const EM y = neumann_inverse_times(x);
            CHECK(y - y * x == x);
        }
    }
}

TEST_CASE("direct series of the return table") {
    const auto g = coin_from_name<ExactScalar>("grover");
    const auto gamma = gamma_table(g, 20, SojournConvention::midpoint);

    SUBCASE("pinned coefficients") {
        const EM s = gamma_bar_direct(gamma, 20, 20);
        CHECK(s.at(4, 4) == unit_entry<ExactScalar>(0, 0));
        CHECK(s.at(4, 2).is_zero());
        CHECK(s.at(4, 0) == unit_entry<ExactScalar>(1, 1));
        CHECK(s.at(0, 0).is_zero());
        CHECK(s.at(3, 0).is_zero());
    }
    SUBCASE("strict variant drops the zero-sojourn column") {
        const EM s = gamma_bar_direct(gamma, 20, 20, false);
        CHECK(s.at(4, 0).is_zero());
        CHECK(s.at(4, 4) == unit_entry<ExactScalar>(0, 0));
    }
}

TEST_CASE("closed form equals the direct series") {
    SUBCASE("exchange coin at full truncation, all columns") {
        const auto g = coin_from_name<ExactScalar>("grover");
        const auto gamma = gamma_table(g, 100, SojournConvention::midpoint);
        const auto exc = first_return_excursions(g, 100);
        const EM direct = gamma_bar_direct(gamma, 100, 100);
        const EM closed = neumann_inverse_times(build_X(exc, 100, 100));
        CHECK(direct == closed);
    }
    SUBCASE("balanced coin with mixed sojourn columns") {
        // Unlike the exchange coin, balanced-coin return paths cross the
        // origin, so interior columns 0 < k < n are populated; the closed
        // form has to reproduce every one of them coefficientwise.
        const auto h = coin_from_name<ExactScalar>("hadamard");
        const auto gamma = gamma_table(h, 24, SojournConvention::midpoint);
        const auto exc = first_return_excursions(h, 24);
        const EM direct = gamma_bar_direct(gamma, 24, 24);
        const EM closed = neumann_inverse_times(build_X(exc, 24, 24));
        CHECK(direct == closed);
    }
}
