#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <optional>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact square root of a nonnegative rational, when one exists.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    const Integer sn = boost::multiprecision::sqrt(num);
    const Integer sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

/// Element of the field Q(i, sqrt(2)), stored as
///   (a + b*sqrt(2)) + i*(c + d*sqrt(2))
/// with arbitrary-precision rationals a, b, c, d. This is the smallest field
/// containing the Grover, Hadamard and identity coin entries together with
/// the imaginary unit, and it is closed under the +, *, conjugation and
/// inversion used throughout the exact backend.
class ExactScalar {
public:
    Rational a, b, c, d;

    ExactScalar() = default;
    explicit ExactScalar(Rational re) : a(std::move(re)) {}
    ExactScalar(Rational re_rat, Rational re_sqrt2)
        : a(std::move(re_rat)), b(std::move(re_sqrt2)) {}
    ExactScalar(Rational re_rat, Rational re_sqrt2, Rational im_rat, Rational im_sqrt2)
        : a(std::move(re_rat)), b(std::move(re_sqrt2)), c(std::move(im_rat)), d(std::move(im_sqrt2)) {}

    static ExactScalar imaginary_unit() { return ExactScalar(0, 0, 1, 0); }
    /// 1/sqrt(2) == sqrt(2)/2, exactly representable.
    static ExactScalar inv_sqrt2() { return ExactScalar(0, Rational(1, 2)); }

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
    bool is_real() const { return c == 0 && d == 0; }

    ExactScalar conj() const { return ExactScalar(a, b, -c, -d); }

    ExactScalar operator-() const { return ExactScalar(-a, -b, -c, -d); }

    ExactScalar& operator+=(const ExactScalar& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }

    friend ExactScalar operator+(ExactScalar x, const ExactScalar& y) { return x += y; }
    friend ExactScalar operator-(ExactScalar x, const ExactScalar& y) { return x -= y; }

    friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
        // Walk tables are sparse, so a zero factor is the common case and
        // sixteen rational products are worth eight sign tests.
        if (x.is_zero() || y.is_zero()) return ExactScalar();
        // (p + i q)(r + i s) = (pr - qs) + i (ps + qr), where each of p, q,
        // r, s lives in Q(sqrt(2)): (a1 + b1 s2)(a2 + b2 s2) =
        // (a1 a2 + 2 b1 b2) + (a1 b2 + b1 a2) s2.
        auto mul_re = [](const Rational& a1, const Rational& b1,
                         const Rational& a2, const Rational& b2) -> Rational {
            return a1 * a2 + 2 * b1 * b2;
        };
        auto mul_s2 = [](const Rational& a1, const Rational& b1,
                         const Rational& a2, const Rational& b2) -> Rational {
            return a1 * b2 + b1 * a2;
        };
        ExactScalar r;
        r.a = mul_re(x.a, x.b, y.a, y.b) - mul_re(x.c, x.d, y.c, y.d);
        r.b = mul_s2(x.a, x.b, y.a, y.b) - mul_s2(x.c, x.d, y.c, y.d);
        r.c = mul_re(x.a, x.b, y.c, y.d) + mul_re(x.c, x.d, y.a, y.b);
        r.d = mul_s2(x.a, x.b, y.c, y.d) + mul_s2(x.c, x.d, y.a, y.b);
        return r;
    }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    /// |z|^2 = z * conj(z); real by construction.
    ExactScalar norm2() const { return *this * conj(); }

    /// Multiplicative inverse; throws on zero.
    ExactScalar inverse() const {
        if (is_zero()) throw Error("division by zero in exact scalar");
        // 1/z = conj(z)/|z|^2 with |z|^2 = m + n*sqrt(2) real; then
        // 1/(m + n s2) = (m - n s2)/(m^2 - 2 n^2).
        const ExactScalar n2 = norm2();
        const Rational denom = n2.a * n2.a - 2 * n2.b * n2.b;
        // denom == 0 would mean |z|^2 = n2 is 0 or irrational-degenerate;
        // impossible for nonzero z since Q(sqrt(2)) is a field.
        ExactScalar inv_n2(n2.a / denom, -n2.b / denom);
        return conj() * inv_n2;
    }

    friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
        return x * y.inverse();
    }

    friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }

    std::complex<double> to_complex() const {
        static const double s2 = 1.4142135623730950488016887242097;
        return {a.convert_to<double>() + b.convert_to<double>() * s2,
                c.convert_to<double>() + d.convert_to<double>() * s2};
    }
};

/// Exact sign of the real algebraic number x + y*sqrt(2).
inline int sign_q_sqrt2(const Rational& x, const Rational& y) {
    const int sx = x.sign();
    const int sy = y.sign();
    if (sy == 0) return sx;
    if (sx == 0) return sy;
    if (sx == sy) return sx;
    // Opposite signs: compare x^2 against 2 y^2; the conjugate product
    // (x + y s2)(x - y s2) = x^2 - 2 y^2 carries the answer.
    const Rational q = x * x - 2 * y * y;
    return q.sign() * sx;
}

/// Exact square root within Q(sqrt(2)) of a nonnegative real element
/// x + y*sqrt(2), when the root stays inside the field.
inline std::optional<ExactScalar> sqrt_in_q_sqrt2(const Rational& x, const Rational& y) {
    const int sg = sign_q_sqrt2(x, y);
    if (sg < 0) return std::nullopt;
    if (sg == 0) return ExactScalar(0);
    if (y == 0) {
        if (auto r = rational_sqrt(x)) return ExactScalar(*r);
        if (auto r = rational_sqrt(x / 2)) return ExactScalar(0, *r);
        return std::nullopt;
    }
    // Want (u + v s2)^2 = u^2 + 2 v^2 + 2 u v s2 = x + y s2 with u, v
    // rational, i.e. u^2 + 2 v^2 = x and 2 u v = y. Eliminating v gives a
    // quadratic in u^2 whose discriminant is x^2 - 2 y^2.
    const auto disc = rational_sqrt(Rational(x * x - 2 * y * y));
    if (!disc) return std::nullopt;
    const Rational hi = (x + *disc) / 2;
    const Rational lo = (x - *disc) / 2;
    for (const Rational& u2 : {hi, lo}) {
        if (auto u = rational_sqrt(u2)) {
            if (*u == 0) continue;
            const Rational v = y / (2 * *u);
            if (*u * *u + 2 * v * v == x && sign_q_sqrt2(*u, v) > 0) {
                return ExactScalar(*u, v);
            }
            if (*u * *u + 2 * v * v == x) {
                return ExactScalar(-*u, -v);
            }
        }
    }
    return std::nullopt;
}

/// Uniform interface over the two computational backends:
///   ExactScalar            -- exact arithmetic in Q(i, sqrt(2))
///   std::complex<double>   -- binary64 floating point
template <class S>
struct scalar_ops;

template <>
struct scalar_ops<ExactScalar> {
    static constexpr bool exact = true;
    static const char* backend_name() { return "exact"; }

    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return ExactScalar(1); }
    static ExactScalar imaginary_unit() { return ExactScalar::imaginary_unit(); }
    static ExactScalar from_int(long v) { return ExactScalar(Rational(v)); }
    static ExactScalar conj(const ExactScalar& s) { return s.conj(); }
    static bool is_zero(const ExactScalar& s) { return s.is_zero(); }
    static ExactScalar inverse(const ExactScalar& s) { return s.inverse(); }
    static std::complex<double> to_complex(const ExactScalar& s) { return s.to_complex(); }

    /// Square root of a nonnegative real scalar (a squared norm). Exact
    /// backends require the root to stay inside the field.
    static ExactScalar real_sqrt(const ExactScalar& s) {
        if (!s.is_real()) throw Error("real_sqrt: scalar has an imaginary part");
        auto r = sqrt_in_q_sqrt2(s.a, s.b);
        if (!r) throw DegenerateBasis("norm has no exact square root in Q(sqrt(2))");
        return *r;
    }
};

template <>
struct scalar_ops<std::complex<double>> {
    static constexpr bool exact = false;
    static const char* backend_name() { return "float"; }

    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> imaginary_unit() { return {0.0, 1.0}; }
    static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static std::complex<double> conj(const std::complex<double>& s) { return std::conj(s); }
    static bool is_zero(const std::complex<double>& s) { return s.real() == 0.0 && s.imag() == 0.0; }
    static std::complex<double> inverse(const std::complex<double>& s) {
        if (is_zero(s)) throw Error("division by zero in float scalar");
        return 1.0 / s;
    }
    static std::complex<double> to_complex(const std::complex<double>& s) { return s; }

    static std::complex<double> real_sqrt(const std::complex<double>& s) {
        if (s.real() < 0.0) throw DegenerateBasis("norm is negative");
        return {std::sqrt(s.real()), 0.0};
    }
};

using FloatScalar = std::complex<double>;

} // namespace qwalk
