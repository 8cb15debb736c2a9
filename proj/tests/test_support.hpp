#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "qwalk/algebra.hpp"
#include "qwalk/scalar.hpp"

namespace qwalk::testing {

/// Small deterministic generator for property-style loops.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) {
        return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Random element of the exact field with small rational parts.
    ExactScalar exact_scalar() {
        auto part = [&] { return Rational(integer(-6, 6), integer(1, 4)); };
        return ExactScalar(part(), part(), part(), part());
    }

    Mat2<ExactScalar> exact_mat2() {
        Mat2<ExactScalar> m;
        for (auto& e : m.e) e = exact_scalar();
        return m;
    }

    std::complex<double> complex_scalar() {
        return {static_cast<double>(integer(-600, 600)) / 100.0,
                static_cast<double>(integer(-600, 600)) / 100.0};
    }

    Mat2<std::complex<double>> complex_mat2() {
        Mat2<std::complex<double>> m;
        for (auto& e : m.e) e = complex_scalar();
        return m;
    }

private:
    std::mt19937_64 rng_;
};

inline double frobenius_norm_double(const Mat2<std::complex<double>>& m) {
    double acc = 0;
    for (const auto& e : m.e) acc += std::norm(e);
    return std::sqrt(acc);
}

template <class S>
double max_abs_entry_difference(const Mat2<S>& a, const Mat2<S>& b) {
    double worst = 0;
    for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(scalar_ops<S>::to_complex(a.e[i]) -
                                         scalar_ops<S>::to_complex(b.e[i])));
    }
    return worst;
}

} // namespace qwalk::testing
