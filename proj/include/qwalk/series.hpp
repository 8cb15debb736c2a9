#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "qwalk/algebra.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/sojourn.hpp"

namespace qwalk {

/// Coefficient-type interface for bivariate series: scalars and 2x2
/// matrices share add/mul/zero/identity plus a flattened complex view used
/// by the convergence diagnostics.
template <class C>
struct coef_ops;

template <>
struct coef_ops<ExactScalar> {
    using scalar = ExactScalar;
    static constexpr int entry_count = 1;
    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar identity() { return ExactScalar(1); }
    static bool is_zero(const ExactScalar& c) { return c.is_zero(); }
    static std::complex<double> entry(const ExactScalar& c, int) { return c.to_complex(); }
    static ExactScalar scale(const ExactScalar& c, long f) {
        return c * ExactScalar(Rational(f));
    }
};

template <>
struct coef_ops<std::complex<double>> {
    using scalar = std::complex<double>;
    static constexpr int entry_count = 1;
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> identity() { return {1.0, 0.0}; }
    static bool is_zero(const std::complex<double>& c) { return c == std::complex<double>(); }
    static std::complex<double> entry(const std::complex<double>& c, int) { return c; }
    static std::complex<double> scale(const std::complex<double>& c, long f) {
        return c * static_cast<double>(f);
    }
};

template <class S>
struct coef_ops<Mat2<S>> {
    using scalar = S;
    static constexpr int entry_count = 4;
    static Mat2<S> zero() { return Mat2<S>::zero(); }
    static Mat2<S> identity() { return Mat2<S>::identity(); }
    static bool is_zero(const Mat2<S>& c) { return c.is_zero(); }
    static std::complex<double> entry(const Mat2<S>& c, int i) {
        return scalar_ops<S>::to_complex(c.e[i]);
    }
    static Mat2<S> scale(const Mat2<S>& c, long f) {
        return scalar_ops<S>::from_int(f) * c;
    }
};

/// Truncated bivariate formal power series sum c_{ij} z^i t^j with sparse
/// coefficient storage; degrees are retained up to the truncation orders
/// (order_z, order_t) inclusive, and arithmetic is exact on every retained
/// degree (full convolution below truncation).
template <class C>
class BiSeries {
public:
    BiSeries(int order_z, int order_t) : nz_(order_z), nt_(order_t) {
        if (order_z < 0 || order_t < 0) throw InvalidConfig("negative truncation order");
    }

    int order_z() const { return nz_; }
    int order_t() const { return nt_; }

    const C& at(int i, int j) const {
        static const C zero = coef_ops<C>::zero();
        const auto it = c_.find({i, j});
        return it == c_.end() ? zero : it->second;
    }

    void set(int i, int j, C v) {
        if (i < 0 || j < 0 || i > nz_ || j > nt_) {
            throw TruncationOverflow("coefficient (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") outside truncation (" +
                                     std::to_string(nz_) + "," + std::to_string(nt_) + ")");
        }
        if (coef_ops<C>::is_zero(v)) {
            c_.erase({i, j});
        } else {
            c_[{i, j}] = std::move(v);
        }
    }

    void add_at(int i, int j, const C& v) {
        C cur = at(i, j);
        cur += v;
        set(i, j, std::move(cur));
    }

    const std::map<std::pair<int, int>, C>& coefficients() const { return c_; }

    bool is_zero() const { return c_.empty(); }

    static BiSeries one(int order_z, int order_t) {
        BiSeries s(order_z, order_t);
        s.set(0, 0, coef_ops<C>::identity());
        return s;
    }

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b) {
        BiSeries r(std::min(a.nz_, b.nz_), std::min(a.nt_, b.nt_));
        for (const auto& [ij, v] : a.c_)
            if (ij.first <= r.nz_ && ij.second <= r.nt_) r.add_at(ij.first, ij.second, v);
        for (const auto& [ij, v] : b.c_)
            if (ij.first <= r.nz_ && ij.second <= r.nt_) r.add_at(ij.first, ij.second, v);
        return r;
    }

    friend BiSeries operator-(const BiSeries& a, const BiSeries& b) {
        BiSeries r(std::min(a.nz_, b.nz_), std::min(a.nt_, b.nt_));
        for (const auto& [ij, v] : a.c_)
            if (ij.first <= r.nz_ && ij.second <= r.nt_) r.add_at(ij.first, ij.second, v);
        for (const auto& [ij, v] : b.c_) {
            if (ij.first > r.nz_ || ij.second > r.nt_) continue;
            C cur = r.at(ij.first, ij.second);
            cur -= v;
            r.set(ij.first, ij.second, std::move(cur));
        }
        return r;
    }

    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        BiSeries r(std::min(a.nz_, b.nz_), std::min(a.nt_, b.nt_));
        std::map<std::pair<int, int>, C> acc;
        for (const auto& [ij1, v1] : a.c_) {
            if (ij1.first > r.nz_ || ij1.second > r.nt_) continue;
            for (const auto& [ij2, v2] : b.c_) {
                const int i = ij1.first + ij2.first;
                const int j = ij1.second + ij2.second;
                if (i > r.nz_ || j > r.nt_) continue;
                const C prod = v1 * v2;
                auto [it, inserted] = acc.try_emplace({i, j}, prod);
                if (!inserted) it->second += prod;
            }
        }
        for (auto& [ij, v] : acc) {
            if (!coef_ops<C>::is_zero(v)) r.c_[ij] = std::move(v);
        }
        return r;
    }

    friend bool operator==(const BiSeries& a, const BiSeries& b) {
        return a.nz_ == b.nz_ && a.nt_ == b.nt_ && a.c_ == b.c_;
    }

private:
    int nz_, nt_;
    std::map<std::pair<int, int>, C> c_;
};

/// Builds a series from an (n, k)-indexed coefficient table; the n = 0 row
/// is dropped (the series' time sums start at n = 1).
template <class C>
BiSeries<C> series_from_table(const std::map<std::pair<std::size_t, int>, C>& table,
                              int order_z, int order_t) {
    BiSeries<C> s(order_z, order_t);
    for (const auto& [nk, v] : table) {
        const auto [n, k] = nk;
        if (n == 0) continue;
        if (n > static_cast<std::size_t>(order_z) || k > order_t || k < 0) {
            throw TruncationOverflow("table entry (" + std::to_string(n) + "," +
                                     std::to_string(k) + ") outside truncation");
        }
        s.set(static_cast<int>(n), k, v);
    }
    return s;
}

/// s(z,t) + s(-z,t) + s(z,-t) + s(-z,-t): the four sign images cancel every
/// coefficient with an odd degree and quadruple the even-even ones.
template <class C>
BiSeries<C> symmetrize(const BiSeries<C>& s) {
    BiSeries<C> r(s.order_z(), s.order_t());
    for (const auto& [ij, v] : s.coefficients()) {
        if (ij.first % 2 == 0 && ij.second % 2 == 0) {
            r.set(ij.first, ij.second, coef_ops<C>::scale(v, 4));
        }
    }
    return r;
}

/// X = sum over even lengths 2r of plus(2r) (zt)^{2r} + minus(2r) z^{2r}.
/// Terms whose degree exceeds the truncation are dropped; the constant term
/// is always zero.
template <class S>
BiSeries<Mat2<S>> build_X(const ExcursionSequences<S>& exc, int order_z, int order_t) {
    BiSeries<Mat2<S>> x(order_z, order_t);
    for (std::size_t len = 2; len <= exc.max_time; len += 2) {
        const int d = static_cast<int>(len);
        if (d <= order_z && d <= order_t && !exc.plus_at(len).is_zero()) {
            x.add_at(d, d, exc.plus_at(len));
        }
        if (d <= order_z && !exc.minus_at(len).is_zero()) {
            x.add_at(d, 0, exc.minus_at(len));
        }
    }
    return x;
}

/// X (I - X)^{-1} as a truncated series, via the fixed-point iteration
/// Y <- X + X Y (the Neumann sum sum_{j>=1} X^j). Requires X's constant
/// term to vanish so the sum is finite order by order; the defining
/// identity Y (I - X) = X is re-verified before returning.
template <class C>
BiSeries<C> neumann_inverse_times(const BiSeries<C>& x) {
    if (!coef_ops<C>::is_zero(x.at(0, 0))) {
        throw NonNilpotentConstantTerm("series has a nonzero constant term; "
                                       "formal inversion of I - X is undefined");
    }
    BiSeries<C> y = x;
    const int max_iter = x.order_z() + x.order_t() + 1;
    for (int iter = 0; iter < max_iter; ++iter) {
        BiSeries<C> next = x + x * y;
        if (next == y) break;
        y = std::move(next);
    }
    // Internal consistency: y (I - x) must reproduce x to truncation order.
    const BiSeries<C> residue = y - y * x - x;
    if constexpr (scalar_ops<typename coef_ops<C>::scalar>::exact) {
        if (!residue.is_zero()) throw Error("formal inversion failed the defining identity");
    } else {
        double worst = 0;
        for (const auto& [ij, v] : residue.coefficients()) {
            (void)ij;
            for (int e = 0; e < coef_ops<C>::entry_count; ++e) {
                worst = std::max(worst, std::abs(coef_ops<C>::entry(v, e)));
            }
        }
        if (worst > 1e-9) throw Error("formal inversion failed the defining identity");
    }
    return y;
}

/// Collects the return-path table into its generating series: coefficient
/// of z^n t^k is the table's (n, k) weight, over even n >= 2 and even k.
/// The k = 0 column carries the strictly-left return weights; a strict
/// variant drops it (include_k_zero = false).
template <class S>
BiSeries<Mat2<S>> gamma_bar_direct(const GammaTable<S>& gamma, int order_z, int order_t,
                                   bool include_k_zero = true) {
    BiSeries<Mat2<S>> s(order_z, order_t);
    for (const auto& [nk, v] : gamma.nonzero()) {
        const auto [n, k] = nk;
        if (n == 0 || n % 2 != 0 || k % 2 != 0) continue;
        if (k == 0 && !include_k_zero) continue;
        if (n > static_cast<std::size_t>(order_z) || k > order_t) continue;
        s.set(static_cast<int>(n), k, v);
    }
    return s;
}

} // namespace qwalk
