#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/algebra.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

using CMat2 = Mat2<std::complex<double>>;

/// Momentum-space coin at momentum k: diag(e^{-ik}, e^{ik}) * U.
CMat2 fourier_coin(const CMat2& u, double k);

/// Roots of the characteristic polynomial of a 2x2 matrix, sorted by
/// principal argument (imaginary parts within 1e-14 of zero are snapped
/// before taking the argument, so the ordering of real eigenvalues is
/// stable against sign noise).
std::array<std::complex<double>, 2> eigenvalues2(const CMat2& m);

/// Eigenvalues of the momentum-space coin over a uniform grid of M momenta
/// in [0, 2pi), each pair sorted by principal argument.
struct SpectrumSample {
    std::vector<double> momenta;
    std::vector<std::array<std::complex<double>, 2>> eigenvalues;
};

SpectrumSample sample_spectrum(const CMat2& u, int grid_size);

struct FlatnessResult {
    bool flat = false;
    double max_deviation = 0;
};

/// Max per-band deviation of the sorted eigenvalues from their value at
/// k = 0; flat iff below tolerance.
FlatnessResult flatness_scan(const CMat2& u, int grid_size, double tol = 1e-9);

/// Coin family for the conjecture scan.
///   off-diagonal:   [[0, b], [c, 0]] with independent unimodular b, c
///   random-unitary: phase/angle parameterization covering U(2)
///   named:          fixed list of named coins
struct ScanFamily {
    std::string kind = "off-diagonal";
    std::vector<std::string> names; // used by kind == "named"
};

struct ScanReport {
    int index = 0;
    std::string family;
    std::string label;                    // coin name for named rows
    std::array<double, 8> coin = {};      // re/im of the four entries, row-major
    bool flat_band = false;
    double max_deviation = 0;
    std::string decay_class;              // trend of the return-path series coefficients
    bool divergent = false;               // divergence flag at (z,t) = (1,1)
    double avg_return_probability = 0;    // time-averaged at T = 200
    bool conjecture_consistent = false;   // NOT divergent OR flat_band
};

struct ScanSettings {
    std::size_t sojourn_time = 40;   // horizon for the return-path table (even)
    std::size_t return_time = 200;   // averaging window for return probability
    int grid_size = 1024;
    double flat_tol = 1e-9;
    ResourceLimits limits = ResourceLimits::from_env();
};

/// Runs the divergence-vs-flatness audit over sampled coins. Sampling is
/// reproducible bit-for-bit from (family, count, seed): angles come from a
/// fixed 64-bit Mersenne Twister mapped through the 53-bit mantissa rule
/// u = (next() >> 11) * 2^-53 (documented in the README as part of the
/// reproducibility contract).
std::vector<ScanReport> conjecture_scan(const ScanFamily& family, int count,
                                        std::uint64_t seed,
                                        const ScanSettings& settings = {});

} // namespace qwalk
