#include "qwalk/spectral.hpp"

#include <cmath>
#include <random>

#include "qwalk/diagnostics.hpp"
#include "qwalk/series.hpp"
#include "qwalk/sojourn.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double snapped_principal_arg(std::complex<double> v) {
    double im = v.imag();
    if (std::abs(im) < 1e-14 * std::max(1.0, std::abs(v))) im = 0.0;
    return std::atan2(im, v.real());
}

/// Uniform double in [0, 1) from the generator's top 53 bits; fixed mapping,
/// part of the reproducibility contract (avoids the unspecified behavior of
/// std::uniform_real_distribution across standard libraries).
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_angle(std::mt19937_64& rng) { return kTwoPi * uniform_unit(rng); }

} // namespace

CMat2 fourier_coin(const CMat2& u, double k) {
    if (!is_unitary(u)) throw NonUnitaryCoin("momentum-space construction needs a unitary coin");
    const std::complex<double> down = std::polar(1.0, -k);
    const std::complex<double> up = std::polar(1.0, k);
    CMat2 m;
    m.e[0] = down * u.e[0];
    m.e[1] = down * u.e[1];
    m.e[2] = up * u.e[2];
    m.e[3] = up * u.e[3];
    return m;
}

std::array<std::complex<double>, 2> eigenvalues2(const CMat2& m) {
    const std::complex<double> tr = m.trace();
    const std::complex<double> det = m.e[0] * m.e[3] - m.e[1] * m.e[2];
    const std::complex<double> sq = std::sqrt(tr * tr - 4.0 * det);
    std::array<std::complex<double>, 2> lambda{(tr + sq) * 0.5, (tr - sq) * 0.5};
    const double a0 = snapped_principal_arg(lambda[0]);
    const double a1 = snapped_principal_arg(lambda[1]);
    if (a1 < a0 - 1e-12) std::swap(lambda[0], lambda[1]);
    return lambda;
}

SpectrumSample sample_spectrum(const CMat2& u, int grid_size) {
    if (grid_size < 16) throw InvalidConfig("momentum grid needs at least 16 points");
    SpectrumSample sample;
    sample.momenta.reserve(grid_size);
    sample.eigenvalues.reserve(grid_size);
    for (int j = 0; j < grid_size; ++j) {
        const double k = kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size);
        sample.momenta.push_back(k);
        sample.eigenvalues.push_back(eigenvalues2(fourier_coin(u, k)));
    }
    return sample;
}

FlatnessResult flatness_scan(const CMat2& u, int grid_size, double tol) {
    const SpectrumSample sample = sample_spectrum(u, grid_size);
    FlatnessResult result;
    const auto& ref = sample.eigenvalues.front();
    for (const auto& pair : sample.eigenvalues) {
        for (int b = 0; b < 2; ++b) {
            result.max_deviation = std::max(result.max_deviation, std::abs(pair[b] - ref[b]));
        }
    }
    result.flat = result.max_deviation < tol;
    return result;
}

namespace {

struct SampledCoin {
    CMat2 coin;
    std::string label;
};

SampledCoin draw_coin(const ScanFamily& family, int index, std::mt19937_64& rng) {
    SampledCoin out;
    if (family.kind == "off-diagonal") {
        const double theta_b = uniform_angle(rng);
        const double theta_c = uniform_angle(rng);
        out.coin.e[1] = std::polar(1.0, theta_b);
        out.coin.e[2] = std::polar(1.0, theta_c);
        out.label = "off-diagonal-" + std::to_string(index);
    } else if (family.kind == "random-unitary") {
        const double alpha = uniform_angle(rng);
        const double beta = uniform_angle(rng);
        const double gamma = uniform_angle(rng);
        const double theta = std::asin(std::sqrt(uniform_unit(rng)));
        const std::complex<double> phase = std::polar(1.0, alpha);
        const double c = std::cos(theta), s = std::sin(theta);
        out.coin.e[0] = phase * std::polar(c, beta);
        out.coin.e[1] = phase * std::polar(s, gamma);
        out.coin.e[2] = phase * (-std::polar(s, -gamma));
        out.coin.e[3] = phase * std::polar(c, -beta);
        out.label = "random-unitary-" + std::to_string(index);
    } else if (family.kind == "named") {
        const std::string& name = family.names.at(static_cast<std::size_t>(index));
        out.coin = coin_from_name<std::complex<double>>(name);
        out.label = name;
    } else {
        throw InvalidConfig("unknown scan family: " + family.kind);
    }
    return out;
}

} // namespace

std::vector<ScanReport> conjecture_scan(const ScanFamily& family, int count,
                                        std::uint64_t seed, const ScanSettings& settings) {
    if (count < 0) throw InvalidConfig("scan count must be nonnegative");
    std::mt19937_64 rng(seed);
    const int rows = family.kind == "named" ? static_cast<int>(family.names.size()) : count;

    std::vector<ScanReport> reports;
    reports.reserve(static_cast<std::size_t>(rows));
    for (int index = 0; index < rows; ++index) {
        const SampledCoin sampled = draw_coin(family, index, rng);
        if (!is_unitary(sampled.coin)) {
            throw NonUnitarySample("sampled coin failed the unitarity check");
        }

        ScanReport report;
        report.index = index;
        report.family = family.kind;
        report.label = sampled.label;
        for (int i = 0; i < 4; ++i) {
            report.coin[2 * i] = sampled.coin.e[i].real();
            report.coin[2 * i + 1] = sampled.coin.e[i].imag();
        }

        const FlatnessResult flat =
            flatness_scan(sampled.coin, settings.grid_size, settings.flat_tol);
        report.flat_band = flat.flat;
        report.max_deviation = flat.max_deviation;

        const std::size_t n_sojourn = settings.sojourn_time - settings.sojourn_time % 2;
        const GammaTable<std::complex<double>> gamma = gamma_table(
            sampled.coin, n_sojourn, SojournConvention::midpoint, settings.limits);
        const BiSeries<CMat2> series = gamma_bar_direct(
            gamma, static_cast<int>(n_sojourn), static_cast<int>(n_sojourn));
        const DiagnosticsReport diag = convergence_diagnostics(
            series, {{std::complex<double>(1.0, 0.0), std::complex<double>(1.0, 0.0)}});
        report.decay_class = to_string(diag.overall_decay);
        report.divergent = diag.any_divergent;

        const Vec2<std::complex<double>> state(std::complex<double>(0.0, 0.0),
                                               std::complex<double>(0.0, 1.0));
        const WalkConfig<std::complex<double>> config(sampled.coin, state,
                                                      settings.return_time, settings.limits);
        const AmplitudeTable<std::complex<double>> table = evolve_xi(config);
        report.avg_return_probability =
            averaged_return_probability(table, state, settings.return_time).real();

        report.conjecture_consistent = !report.divergent || report.flat_band;
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace qwalk
