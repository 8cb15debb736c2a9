// Shipped acceptance suite. Each criterion prints exactly one PASS/FAIL line
// with its measured runtime against the allowed budget; the process exit code
// is the number of failed criteria. Criteria are self-contained and ordered
// so that the exhaustive-enumeration ground truth comes first.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "qwalk/diagnostics.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/run.hpp"
#include "qwalk/series.hpp"
#include "qwalk/sojourn.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

int failures = 0;

template <class Body>
void criterion(int index, const char* label, double budget_seconds, Body&& body) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
        if (!ok) note = " (check failed)";
    } catch (const std::exception& e) {
        note = std::string(" (exception: ") + e.what() + ")";
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    if (ok && secs >= budget_seconds) {
        ok = false;
        note = " (over time budget)";
    }
    std::printf("%s  %2d. %s  [%.2fs / %.0fs]%s\n", ok ? "PASS" : "FAIL", index, label, secs,
                budget_seconds, note.c_str());
    if (!ok) ++failures;
}

using ES = ExactScalar;
const ES kOne = scalar_ops<ES>::one();

bool exactly_equal(const Mat2<ES>& a, const Mat2<ES>& b) { return (a - b).is_zero(); }

ES frobenius_sq(const Mat2<ES>& m) {
    ES acc;
    for (const auto& e : m.e) acc += e * e.conj();
    return acc;
}

/// 53-bit uniform variate, the documented reproducibility contract.
double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// -------------------------------------------------------------------------
// 1. Dynamic programming equals exhaustive enumeration for every table.

bool oracle_equivalence() {
    const std::vector<std::string> coins = {"grover", "hadamard", "identity"};
    const std::size_t top = 12;
    for (const std::string& name : coins) {
        const Mat2<ES> coin = coin_from_name<ES>(name);
        const ExcursionSequences<ES> exc = first_return_excursions(coin, top);
        const AmplitudeTable<ES> xi = evolve_xi(
            WalkConfig<ES>(coin, Vec2<ES>(kOne, ES()), top));
        for (const SojournConvention conv :
             {SojournConvention::midpoint, SojournConvention::endpoint}) {
            const GammaTable<ES> gamma = gamma_table(coin, top, conv);
            const PsiTable<ES> psi = psi_table(coin, 0, top, conv);
            for (std::size_t n = 0; n <= top; ++n) {
                const OracleTables<ES> oracle = oracle_tables(coin, n, conv);
                static const Mat2<ES> zero = Mat2<ES>::zero();
                for (long x = -static_cast<long>(n); x <= static_cast<long>(n); x += 2) {
                    const auto it = oracle.xi.find(static_cast<int>(x));
                    const Mat2<ES>& want = it == oracle.xi.end() ? zero : it->second;
                    if (!exactly_equal(xi.at(n, static_cast<int>(x)), want)) return false;
                }
                for (int k = 0; static_cast<std::size_t>(k) <= n; ++k) {
                    const auto it = oracle.gamma.find(k);
                    const Mat2<ES>& want = it == oracle.gamma.end() ? zero : it->second;
                    if (!exactly_equal(gamma.at(n, k), want)) return false;
                }
                std::size_t cells_at_n = 0;
                for (const auto& [key, w] : psi.by_target) {
                    if (std::get<0>(key) != n) continue;
                    ++cells_at_n;
                    const auto it = oracle.psi.find({std::get<1>(key), std::get<2>(key)});
                    if (it == oracle.psi.end() || !exactly_equal(w, it->second)) return false;
                }
                if (cells_at_n != oracle.psi.size()) return false;
                if (n >= 2 && n % 2 == 0) {
                    if (!exactly_equal(exc.plus_at(n), oracle.f_plus)) return false;
                    if (!exactly_equal(exc.minus_at(n), oracle.f_minus)) return false;
                }
            }
        }
    }
    return true;
}

// -------------------------------------------------------------------------
// 2. The exchange-coin walk started in [0, i] is deterministic.

bool deterministic_exchange_walk() {
    const Mat2<ES> coin = coin_from_name<ES>("grover");
    const Vec2<ES> state(ES(), ES::imaginary_unit());
    const std::size_t top = 200;
    const AmplitudeTable<ES> table = evolve_xi(WalkConfig<ES>(coin, state, top));
    for (std::size_t n = 1; n <= top; ++n) {
        const int there = n % 2 == 1 ? -1 : 0;
        const Vec2<ES> v = table.at(n, there) * state;
        if (!(v.norm2() - kOne).is_zero()) return false;
    }
    const ES avg = averaged_return_probability(table, state, top);
    return (avg - ES(Rational(1, 2))).is_zero();
}

// -------------------------------------------------------------------------
// 3. Exchange-coin return weights: middle columns vanish, edge columns
//    keep unit norm forever.

bool sparsity_and_non_decay() {
    const Mat2<ES> coin = coin_from_name<ES>("grover");
    const GammaTable<ES> gamma = gamma_table(coin, 200, SojournConvention::midpoint);
    for (int n = 1; n <= 100; ++n) {
        const int len = 2 * n;
        for (int k = 1; k < len; ++k) {
            if (!gamma.at(len, k).is_zero()) return false;
        }
        if (!(frobenius_sq(gamma.at(len, len)) - kOne).is_zero()) return false;
        if (!(frobenius_sq(gamma.at(len, 0)) - kOne).is_zero()) return false;
    }
    return true;
}

// -------------------------------------------------------------------------
// 4. Boundary divergence diagnostic: exchange-coin partial sums grow like
//    floor(N/2) and flag divergent; the balanced coin's series decays and
//    stays unflagged.

bool divergence_diagnostic() {
    const std::vector<std::pair<std::complex<double>, std::complex<double>>> at_one = {
        {{1.0, 0.0}, {1.0, 0.0}}};

    const Mat2<ES> grover = coin_from_name<ES>("grover");
    const GammaTable<ES> gg = gamma_table(grover, 100, SojournConvention::midpoint);
    const BiSeries<Mat2<ES>> gbar = gamma_bar_direct(gg, 100, 100);
    const DiagnosticsReport report = convergence_diagnostics(gbar, at_one);
    if (!report.any_divergent) return false;
    for (const int e : {0, 3}) { // (0,0) and (1,1) matrix entries
        const EntryDiagnostics& entry = report.entries[e];
        if (!entry.evals[0].divergent) return false;
        if (entry.evals[0].trigger != "non-decaying-terms") return false;
        for (int m = 0; m <= 100; ++m) {
            if (entry.evals[0].partial_sum_norms[m] != static_cast<double>(m / 2)) return false;
        }
    }

    using FS = FloatScalar;
    const Mat2<FS> hadamard = coin_from_name<FS>("hadamard");
    const GammaTable<FS> hg = gamma_table(hadamard, 100, SojournConvention::midpoint);
    const BiSeries<Mat2<FS>> hbar = gamma_bar_direct(hg, 100, 100);
    if (convergence_diagnostics(hbar, at_one).any_divergent) return false;

    // Coefficient-norm trend over orders 20..100: total norm mass per degree,
    // averaged over five windows to smooth the quasi-periodic modulation,
    // must fall strictly from window to window.
    std::vector<double> mass(101, 0.0);
    for (const auto& [nk, m] : hg.nonzero()) {
        if (nk.first > 100) continue;
        double frob = 0;
        for (const auto& e : m.e) frob += std::norm(e);
        mass[nk.first] += std::sqrt(frob);
    }
    std::vector<double> window_mean;
    for (int lo = 20; lo < 100; lo += 16) {
        const int hi = std::min(lo + 16, 100);
        double sum = 0;
        int cnt = 0;
        for (int m = lo; m < hi; m += 2) {
            sum += mass[m];
            ++cnt;
        }
        window_mean.push_back(sum / cnt);
    }
    for (std::size_t w = 1; w < window_mean.size(); ++w) {
        if (!(window_mean[w] < window_mean[w - 1])) return false;
    }
    return true;
}

// -------------------------------------------------------------------------
// 5. Renewal identity: enumeration-verified excursions rebuild the return
//    table with zero residual in one factor order; the fitted rank-one base
//    matrices cannot rebuild the exchange-coin table.

bool renewal_identity() {
    for (const std::string& name : {std::string("grover"), std::string("hadamard")}) {
        const Mat2<ES> coin = coin_from_name<ES>(name);
        const ExcursionSequences<ES> exc = first_return_excursions(coin, 20);
        // Cross-check the excursion matrices against exhaustive enumeration
        // as far as the path cap allows cheaply.
        for (std::size_t j = 2; j <= 14; j += 2) {
            const OracleTables<ES> oracle =
                oracle_tables(coin, j, SojournConvention::midpoint);
            if (!exactly_equal(exc.plus_at(j), oracle.f_plus)) return false;
            if (!exactly_equal(exc.minus_at(j), oracle.f_minus)) return false;
        }
        const GammaTable<ES> gamma = gamma_table(coin, 20, SojournConvention::midpoint);
        const RenewalReport report = verify_renewal(gamma, exc);
        if (!(report.right_order_exact || report.left_order_exact)) return false;
        if (name == "grover" && !(report.max_residual_fitted > 0.5)) return false;
    }
    return true;
}

// -------------------------------------------------------------------------
// 6. Closed form: the Neumann sum X(I-X)^{-1} equals the directly collected
//    series coefficientwise at truncation order 100.

bool closed_form_equality() {
    const Mat2<ES> coin = coin_from_name<ES>("grover");
    const ExcursionSequences<ES> exc = first_return_excursions(coin, 100);
    const BiSeries<Mat2<ES>> x = build_X(exc, 100, 100);
    const BiSeries<Mat2<ES>> neumann = neumann_inverse_times(x);
    const GammaTable<ES> gamma = gamma_table(coin, 100, SojournConvention::midpoint);
    return neumann == gamma_bar_direct(gamma, 100, 100);
}

// -------------------------------------------------------------------------
// 7. Symmetrization: odd degrees vanish, even-even coefficients quadruple.

bool symmetrization_algebra() {
    std::mt19937_64 gen(20260816);
    const ES four(Rational(4));
    for (int trial = 0; trial < 100; ++trial) {
        BiSeries<ES> s(12, 12);
        for (int i = 0; i <= 12; ++i) {
            for (int j = 0; j <= 12; ++j) {
                if (gen() % 3 == 0) continue; // keep it sparse
                s.set(i, j, ES(Rational(static_cast<long>(gen() % 19) - 9,
                                        1 + static_cast<long>(gen() % 4))));
            }
        }
        const BiSeries<ES> sym = symmetrize(s);
        for (int i = 0; i <= 12; ++i) {
            for (int j = 0; j <= 12; ++j) {
                const ES want = (i % 2 == 0 && j % 2 == 0) ? four * s.at(i, j) : ES();
                if (!(sym.at(i, j) - want).is_zero()) return false;
            }
        }
    }
    return true;
}

// -------------------------------------------------------------------------
// 8. Flat-band detection on the momentum grid.

bool flat_band_detection() {
    using FS = FloatScalar;
    const Mat2<FS> grover = coin_from_name<FS>("grover");
    const FlatnessResult g = flatness_scan(grover, 1024);
    if (!g.flat || !(g.max_deviation < 1e-12)) return false;
    for (const double k : {0.0, 0.7, 2.0, 3.1}) {
        const auto lam = eigenvalues2(fourier_coin(grover, k));
        if (std::abs(lam[0] - std::complex<double>(1, 0)) > 1e-9) return false;
        if (std::abs(lam[1] - std::complex<double>(-1, 0)) > 1e-9) return false;
    }

    const FlatnessResult h = flatness_scan(coin_from_name<FS>("hadamard"), 1024);
    if (h.flat || !(h.max_deviation > 0.1)) return false;

    std::mt19937_64 gen(424242);
    for (int i = 0; i < 20; ++i) {
        const double tb = 2.0 * M_PI * unit_uniform(gen);
        const double tc = 2.0 * M_PI * unit_uniform(gen);
        Mat2<FS> coin;
        coin.e[1] = std::polar(1.0, tb);
        coin.e[2] = std::polar(1.0, tc);
        if (!flatness_scan(coin, 1024).flat) return false;
    }
    return true;
}

// -------------------------------------------------------------------------
// 9. Scan audit: the anti-diagonal family yields zero counterexample
//    candidates and renders byte-identically on rerun.

bool scan_audit() {
    const ScanFamily family; // off-diagonal by default
    const std::vector<ScanReport> rows = conjecture_scan(family, 20, 7);
    if (rows.size() != 20) return false;
    for (const ScanReport& row : rows) {
        if (!row.conjecture_consistent) return false;
        if (!row.flat_band || !row.divergent) return false; // the family's signature
    }

    RunConfig cfg;
    cfg.command = "scan";
    cfg.count = 20;
    cfg.seed = 7;
    const std::string once = render_output(cfg);
    const std::string again = render_output(cfg);
    if (once != again) return false;
    return once.find("counterexample_candidates=0") != std::string::npos;
}

// -------------------------------------------------------------------------
// 10. Basis integrity: exact Gram identity and exact decompose/reconstruct
//     round trips.

bool basis_integrity() {
    std::mt19937_64 gen(99);
    for (const std::string& name :
         {std::string("grover"), std::string("hadamard"), std::string("identity")}) {
        const Mat2<ES> coin = coin_from_name<ES>(name);
        const CoinSplit<ES> split = split_coin(coin);
        const CoinBasis<ES> basis = build_basis(split.p, split.q);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const ES want = i == j ? kOne : ES();
                if (!(trace_inner(basis.m[i], basis.m[j]) - want).is_zero()) return false;
            }
        }
        for (int trial = 0; trial < 100; ++trial) {
            Mat2<ES> m;
            for (auto& e : m.e) {
                auto part = [&] {
                    return Rational(static_cast<long>(gen() % 13) - 6,
                                    1 + static_cast<long>(gen() % 3));
                };
                e = ES(part(), part(), part(), part());
            }
            const auto u = decompose(m, basis);
            if (!exactly_equal(reconstruct(u, basis), m)) return false;
        }
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "exhaustive enumeration matches every dynamic-programming table (n <= 12)",
              30.0, oracle_equivalence);
    criterion(2, "exchange-coin walk from [0,i] is deterministic through n = 200", 1.0,
              deterministic_exchange_walk);
    criterion(3, "return-weight sparsity and unit-norm edge columns through n = 200", 5.0,
              sparsity_and_non_decay);
    criterion(4, "boundary divergence flagged for the exchange coin, not the balanced coin",
              10.0, divergence_diagnostic);
    criterion(5, "renewal identity rebuilds the return table; fitted bases cannot", 10.0,
              renewal_identity);
    criterion(6, "Neumann closed form equals the direct series at order 100", 10.0,
              closed_form_equality);
    criterion(7, "symmetrization zeroes odd degrees and quadruples even ones", 1.0,
              symmetrization_algebra);
    criterion(8, "flat bands detected for exchange-type coins, rejected for balanced", 2.0,
              flat_band_detection);
    criterion(9, "scan audit finds zero counterexample candidates, byte-stable", 60.0,
              scan_audit);
    criterion(10, "orthonormal basis has exact Gram identity and exact round trips", 1.0,
              basis_integrity);
    return failures;
}
