#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/series.hpp"

namespace qwalk {

enum class DecayClass { non_decaying, polynomial_decay, faster };

const char* to_string(DecayClass c);

/// True if a is a slower (worse) decay than b.
inline bool slower_than(DecayClass a, DecayClass b) {
    return static_cast<int>(a) < static_cast<int>(b);
}

/// Classifies the large-order trend of a coefficient-norm sequence
/// (index = degree). Deterministic rule on the nonzero entries:
/// quartile-bucket maxima detect a non-decaying tail, then the flattening
/// of the per-degree log-slope separates polynomial from faster decay.
DecayClass classify_decay(const std::vector<double>& norms);

/// Root-test estimate: 1 / max |c_m|^{1/m} over the nonzero entries in the
/// upper half of the available degrees; +infinity when that tail is zero.
double radius_estimate(const std::vector<double>& norms);

struct SequenceDiagnostics {
    std::vector<double> norms;
    double radius = 0;
    DecayClass decay = DecayClass::faster;
};

struct EvalPointDiagnostics {
    std::complex<double> z, t;
    std::vector<double> term_norms;        // per z-degree: |(sum_j c_{m,j} t^j) z^m|
    std::vector<double> partial_sum_norms; // cumulative sums of the terms, in norm
    double growth_ratio = 0;               // last partial sum over first nonzero one
    bool second_half_monotone = false;
    DecayClass term_decay = DecayClass::faster;
    bool divergent = false;
    std::string trigger; // "non-decaying-terms" | "unbounded-partial-sums" | "none"
};

struct EntryDiagnostics {
    int row = 0, col = 0; // both 0 for scalar series
    SequenceDiagnostics diagonal; // coefficients with z-degree == t-degree
    SequenceDiagnostics t_zero;   // coefficients with t-degree == 0
    DecayClass decay = DecayClass::faster;
    std::vector<EvalPointDiagnostics> evals;
};

struct DiagnosticsReport {
    int order_z = 0, order_t = 0;
    std::vector<EntryDiagnostics> entries;
    DecayClass overall_decay = DecayClass::faster;
    bool any_divergent = false;
};

struct DiagnosticsOptions {
    int min_orders = 20;
    double growth_factor = 10.0;
};

namespace detail {

/// Shared per-entry analysis once the coefficients are flattened to
/// complex doubles, keyed (z-degree, t-degree).
EntryDiagnostics analyze_entry(const std::vector<std::pair<std::pair<int, int>,
                                                           std::complex<double>>>& coef,
                               int order_z, int order_t,
                               const std::vector<std::pair<std::complex<double>,
                                                           std::complex<double>>>& evals,
                               const DiagnosticsOptions& opts);

} // namespace detail

/// Runs the coefficient-trend and partial-sum analysis per matrix entry (or
/// on the single scalar stream) at each evaluation point. The divergence
/// flag is raised when the evaluated term norms fail to decay, or when the
/// partial-sum norms grow monotonically through the second half of the
/// window by at least the configured factor over their first nonzero value.
template <class C>
DiagnosticsReport convergence_diagnostics(
    const BiSeries<C>& s,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& evals,
    const DiagnosticsOptions& opts = {}) {
    if (s.order_z() < opts.min_orders || s.order_t() < opts.min_orders) {
        throw InsufficientOrder("diagnostics need at least " + std::to_string(opts.min_orders) +
                                " orders in each variable, series has (" +
                                std::to_string(s.order_z()) + "," +
                                std::to_string(s.order_t()) + ")");
    }
    DiagnosticsReport report;
    report.order_z = s.order_z();
    report.order_t = s.order_t();
    report.overall_decay = DecayClass::faster;

    for (int e = 0; e < coef_ops<C>::entry_count; ++e) {
        std::vector<std::pair<std::pair<int, int>, std::complex<double>>> flat;
        flat.reserve(s.coefficients().size());
        for (const auto& [ij, v] : s.coefficients()) {
            const std::complex<double> c = coef_ops<C>::entry(v, e);
            if (c != std::complex<double>()) flat.push_back({ij, c});
        }
        EntryDiagnostics entry =
            detail::analyze_entry(flat, s.order_z(), s.order_t(), evals, opts);
        entry.row = coef_ops<C>::entry_count == 4 ? e / 2 : 0;
        entry.col = coef_ops<C>::entry_count == 4 ? e % 2 : 0;
        if (slower_than(entry.decay, report.overall_decay)) report.overall_decay = entry.decay;
        for (const auto& ev : entry.evals) report.any_divergent = report.any_divergent || ev.divergent;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace qwalk
