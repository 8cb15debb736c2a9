#include "qwalk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qwalk {

const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::non_decaying: return "non-decaying";
        case DecayClass::polynomial_decay: return "polynomial-decay";
        case DecayClass::faster: return "faster";
    }
    return "faster";
}

namespace {

struct Item {
    int order;
    double value;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

DecayClass classify_decay(const std::vector<double>& norms) {
    std::vector<Item> items;
    for (std::size_t m = 1; m < norms.size(); ++m) {
        if (norms[m] > 0) items.push_back({static_cast<int>(m), norms[m]});
    }
    // Too sparse to establish a trend; treat as fast (covers the zero
    // series and finitely supported polynomials).
    if (items.size() < 5) return DecayClass::faster;

    // Four consecutive buckets of (roughly) equal item count. Bucket medians
    // smooth the oscillation that walk amplitudes typically carry, so the
    // verdict tracks the envelope rather than individual crests or zeros.
    const std::size_t q = items.size() / 4;
    std::vector<double> bucket_med(4, 0.0);
    std::vector<double> bucket_ord(4, 0.0);
    for (int b = 0; b < 4; ++b) {
        const std::size_t lo = b * q;
        const std::size_t hi = b == 3 ? items.size() : (b + 1) * q;
        std::vector<double> vals, ords;
        for (std::size_t i = lo; i < hi; ++i) {
            vals.push_back(items[i].value);
            ords.push_back(items[i].order);
        }
        bucket_med[b] = median_of(vals);
        bucket_ord[b] = median_of(ords);
    }

    // Per-degree slope of log|c| in the early and late window. A sequence
    // bounded away from zero keeps its median level (slope 0, exactly so for
    // the constant-norm products this toolkit produces); a power law
    // |c_m| ~ m^{-p} has slope -p/m, which flattens as m grows; geometric
    // or faster decay keeps (or steepens) the slope.
    const double s1 = (std::log(bucket_med[1]) - std::log(bucket_med[0])) /
                      (bucket_ord[1] - bucket_ord[0]);
    const double s2 = (std::log(bucket_med[3]) - std::log(bucket_med[2])) /
                      (bucket_ord[3] - bucket_ord[2]);
    if (s1 >= -1e-12) return DecayClass::non_decaying; // medians not falling
    if (std::abs(s2) <= 0.6 * std::abs(s1)) return DecayClass::polynomial_decay;
    return DecayClass::faster;
}

double radius_estimate(const std::vector<double>& norms) {
    if (norms.size() < 2) return std::numeric_limits<double>::infinity();
    const std::size_t top = norms.size() - 1;
    const std::size_t lo = std::max<std::size_t>(1, top / 2);
    double growth = 0;
    for (std::size_t m = lo; m <= top; ++m) {
        if (norms[m] > 0) {
            growth = std::max(growth, std::pow(norms[m], 1.0 / static_cast<double>(m)));
        }
    }
    if (growth == 0) return std::numeric_limits<double>::infinity();
    return 1.0 / growth;
}

namespace detail {

EntryDiagnostics analyze_entry(const std::vector<std::pair<std::pair<int, int>,
                                                           std::complex<double>>>& coef,
                               int order_z, int order_t,
                               const std::vector<std::pair<std::complex<double>,
                                                           std::complex<double>>>& evals,
                               const DiagnosticsOptions& opts) {
    EntryDiagnostics entry;

    const int diag_top = std::min(order_z, order_t);
    entry.diagonal.norms.assign(diag_top + 1, 0.0);
    entry.t_zero.norms.assign(order_z + 1, 0.0);
    for (const auto& [ij, c] : coef) {
        if (ij.first == ij.second && ij.first <= diag_top) {
            entry.diagonal.norms[ij.first] = std::abs(c);
        }
        if (ij.second == 0) entry.t_zero.norms[ij.first] = std::abs(c);
    }
    entry.diagonal.radius = radius_estimate(entry.diagonal.norms);
    entry.diagonal.decay = classify_decay(entry.diagonal.norms);
    entry.t_zero.radius = radius_estimate(entry.t_zero.norms);
    entry.t_zero.decay = classify_decay(entry.t_zero.norms);
    entry.decay = slower_than(entry.diagonal.decay, entry.t_zero.decay) ? entry.diagonal.decay
                                                                        : entry.t_zero.decay;

    for (const auto& [z, t] : evals) {
        EvalPointDiagnostics ev;
        ev.z = z;
        ev.t = t;

        // Row values: fold the t-powers at fixed z-degree, then weight by z^m.
        std::vector<std::complex<double>> tpow(order_t + 1);
        tpow[0] = std::complex<double>(1.0, 0.0);
        for (int j = 1; j <= order_t; ++j) tpow[j] = tpow[j - 1] * t;
        std::vector<std::complex<double>> row(order_z + 1, std::complex<double>());
        for (const auto& [ij, c] : coef) {
            row[ij.first] += c * tpow[ij.second];
        }
        ev.term_norms.assign(order_z + 1, 0.0);
        ev.partial_sum_norms.assign(order_z + 1, 0.0);
        std::complex<double> acc;
        std::complex<double> zpow(1.0, 0.0);
        for (int m = 0; m <= order_z; ++m) {
            const std::complex<double> term = row[m] * zpow;
            ev.term_norms[m] = std::abs(term);
            acc += term;
            ev.partial_sum_norms[m] = std::abs(acc);
            zpow *= z;
        }
        ev.term_decay = classify_decay(ev.term_norms);

        int first_nonzero = -1;
        for (int m = 0; m <= order_z; ++m) {
            if (ev.partial_sum_norms[m] > 0) {
                first_nonzero = m;
                break;
            }
        }
        ev.second_half_monotone = true;
        for (int m = order_z / 2 + 1; m <= order_z; ++m) {
            const double prev = ev.partial_sum_norms[m - 1];
            if (ev.partial_sum_norms[m] < prev - 1e-12 * std::max(1.0, prev)) {
                ev.second_half_monotone = false;
                break;
            }
        }
        ev.growth_ratio = first_nonzero < 0
                              ? 0.0
                              : ev.partial_sum_norms[order_z] /
                                    ev.partial_sum_norms[first_nonzero];

        const bool any_term = first_nonzero >= 0;
        const bool nondecaying_terms = any_term && ev.term_decay == DecayClass::non_decaying;
        const bool unbounded_sums = any_term && ev.second_half_monotone &&
                                    ev.growth_ratio >= opts.growth_factor;
        ev.divergent = nondecaying_terms || unbounded_sums;
        ev.trigger = nondecaying_terms  ? "non-decaying-terms"
                     : unbounded_sums   ? "unbounded-partial-sums"
                                        : "none";
        entry.evals.push_back(std::move(ev));
    }
    return entry;
}

} // namespace detail

} // namespace qwalk
