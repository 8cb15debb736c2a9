#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/scalar.hpp"

namespace qwalk {

template <class S>
struct Mat2 {
    // Row-major entries: e[0] e[1] / e[2] e[3].
    std::array<S, 4> e{scalar_ops<S>::zero(), scalar_ops<S>::zero(),
                       scalar_ops<S>::zero(), scalar_ops<S>::zero()};

    static Mat2 zero() { return {}; }
    static Mat2 identity() {
        Mat2 m;
        m.e[0] = scalar_ops<S>::one();
        m.e[3] = scalar_ops<S>::one();
        return m;
    }

    S& at(int r, int c) { return e[2 * r + c]; }
    const S& at(int r, int c) const { return e[2 * r + c]; }

    bool is_zero() const {
        for (const S& s : e)
            if (!scalar_ops<S>::is_zero(s)) return false;
        return true;
    }

    Mat2 adjoint() const {
        Mat2 m;
        m.e[0] = scalar_ops<S>::conj(e[0]);
        m.e[1] = scalar_ops<S>::conj(e[2]);
        m.e[2] = scalar_ops<S>::conj(e[1]);
        m.e[3] = scalar_ops<S>::conj(e[3]);
        return m;
    }

    S trace() const { return e[0] + e[3]; }

    /// Frobenius norm squared; real and nonnegative.
    S frobenius2() const {
        S acc = scalar_ops<S>::zero();
        for (const S& s : e) acc += scalar_ops<S>::conj(s) * s;
        return acc;
    }

    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) e[i] += o.e[i];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) e[i] -= o.e[i];
        return *this;
    }
    friend Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
    friend Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
    Mat2 operator-() const {
        Mat2 m;
        for (int i = 0; i < 4; ++i) m.e[i] = -e[i];
        return m;
    }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 m;
        m.e[0] = x.e[0] * y.e[0] + x.e[1] * y.e[2];
        m.e[1] = x.e[0] * y.e[1] + x.e[1] * y.e[3];
        m.e[2] = x.e[2] * y.e[0] + x.e[3] * y.e[2];
        m.e[3] = x.e[2] * y.e[1] + x.e[3] * y.e[3];
        return m;
    }

    friend Mat2 operator*(const S& s, const Mat2& m) {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.e[i] = s * m.e[i];
        return r;
    }

    friend bool operator==(const Mat2& x, const Mat2& y) { return x.e == y.e; }
    friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }
};

template <class S>
struct Vec2 {
    std::array<S, 2> v{scalar_ops<S>::zero(), scalar_ops<S>::zero()};

    Vec2() = default;
    Vec2(S v0, S v1) : v{std::move(v0), std::move(v1)} {}

    /// Squared Euclidean norm; real and nonnegative.
    S norm2() const {
        return scalar_ops<S>::conj(v[0]) * v[0] + scalar_ops<S>::conj(v[1]) * v[1];
    }

    friend Vec2 operator*(const Mat2<S>& m, const Vec2& x) {
        return Vec2(m.e[0] * x.v[0] + m.e[1] * x.v[1],
                    m.e[2] * x.v[0] + m.e[3] * x.v[1]);
    }

    friend bool operator==(const Vec2& x, const Vec2& y) { return x.v == y.v; }
};

/// Hilbert-Schmidt inner product <A|B> = tr(A^* B), antilinear in A.
template <class S>
S trace_inner(const Mat2<S>& a, const Mat2<S>& b) {
    S acc = scalar_ops<S>::zero();
    for (int i = 0; i < 4; ++i) acc += scalar_ops<S>::conj(a.e[i]) * b.e[i];
    return acc;
}

template <class S>
double deviation_from_unitary(const Mat2<S>& u) {
    const Mat2<S> residue = u.adjoint() * u - Mat2<S>::identity();
    return std::sqrt(std::abs(scalar_ops<S>::to_complex(residue.frobenius2()).real()));
}

template <class S>
bool is_unitary(const Mat2<S>& u, double tol = 1e-10) {
    if constexpr (scalar_ops<S>::exact) {
        return (u.adjoint() * u - Mat2<S>::identity()).is_zero();
    } else {
        return deviation_from_unitary(u) < tol;
    }
}

/// Split a unitary coin into its row parts: P keeps the top row (the
/// left-moving branch), Q keeps the bottom row (the right-moving branch),
/// so U = P + Q.
template <class S>
struct CoinSplit {
    Mat2<S> p, q;
};

template <class S>
CoinSplit<S> split_coin(const Mat2<S>& u, double tol = 1e-10) {
    if (!is_unitary(u, tol)) throw NonUnitaryCoin("coin matrix is not unitary");
    CoinSplit<S> s;
    s.p.e[0] = u.e[0];
    s.p.e[1] = u.e[1];
    s.q.e[2] = u.e[2];
    s.q.e[3] = u.e[3];
    return s;
}

/// Orthonormal basis {P, Q, R, S} of the 2x2 matrices under the
/// Hilbert-Schmidt inner product, extending the two coin rows.
template <class S>
struct CoinBasis {
    std::array<Mat2<S>, 4> m; // P, Q, R, S in order

    const Mat2<S>& p() const { return m[0]; }
    const Mat2<S>& q() const { return m[1]; }
    const Mat2<S>& r() const { return m[2]; }
    const Mat2<S>& s() const { return m[3]; }
};

namespace detail {

template <class S>
bool norm_negligible(const S& n2) {
    if constexpr (scalar_ops<S>::exact) {
        return scalar_ops<S>::is_zero(n2);
    } else {
        return scalar_ops<S>::to_complex(n2).real() < 1e-18;
    }
}

} // namespace detail

/// Completes the orthonormal pair {P, Q} to an orthonormal basis by running
/// Gram-Schmidt over the matrix units E11, E12, E21, E22 in that fixed
/// order, keeping the first two candidates with nonzero residue. The fixed
/// order makes the completion deterministic across runs and backends.
template <class S>
CoinBasis<S> build_basis(const Mat2<S>& p, const Mat2<S>& q) {
    const S one = scalar_ops<S>::one();
    auto unit_norm = [&](const Mat2<S>& m) {
        if constexpr (scalar_ops<S>::exact) {
            return trace_inner(m, m) == one;
        } else {
            return std::abs(scalar_ops<S>::to_complex(trace_inner(m, m)) -
                            std::complex<double>(1.0, 0.0)) < 1e-10;
        }
    };
    auto orthogonal = [&](const Mat2<S>& x, const Mat2<S>& y) {
        if constexpr (scalar_ops<S>::exact) {
            return scalar_ops<S>::is_zero(trace_inner(x, y));
        } else {
            return std::abs(scalar_ops<S>::to_complex(trace_inner(x, y))) < 1e-10;
        }
    };
    if (!unit_norm(p) || !unit_norm(q) || !orthogonal(p, q)) {
        throw DegenerateBasis("row parts do not form an orthonormal pair");
    }

    CoinBasis<S> basis;
    basis.m[0] = p;
    basis.m[1] = q;
    int found = 2;

    std::array<Mat2<S>, 4> candidates;
    candidates[0].e[0] = one; // E11
    candidates[1].e[1] = one; // E12
    candidates[2].e[2] = one; // E21
    candidates[3].e[3] = one; // E22

    for (const Mat2<S>& cand : candidates) {
        if (found == 4) break;
        Mat2<S> v = cand;
        for (int i = 0; i < found; ++i) {
            v -= trace_inner(basis.m[i], cand) * basis.m[i];
        }
        const S n2 = trace_inner(v, v);
        if (detail::norm_negligible(n2)) continue;
        const S inv_norm = scalar_ops<S>::inverse(scalar_ops<S>::real_sqrt(n2));
        basis.m[found] = inv_norm * v;
        ++found;
    }
    if (found != 4) throw DegenerateBasis("could not complete an orthonormal basis");
    return basis;
}

/// Coefficients of M in the basis: M = u0 P + u1 Q + u2 R + u3 S with
/// u_i = <basis_i | M>.
template <class S>
std::array<S, 4> decompose(const Mat2<S>& m, const CoinBasis<S>& basis) {
    return {trace_inner(basis.m[0], m), trace_inner(basis.m[1], m),
            trace_inner(basis.m[2], m), trace_inner(basis.m[3], m)};
}

template <class S>
Mat2<S> reconstruct(const std::array<S, 4>& u, const CoinBasis<S>& basis) {
    Mat2<S> m = u[0] * basis.m[0];
    m += u[1] * basis.m[1];
    m += u[2] * basis.m[2];
    m += u[3] * basis.m[3];
    return m;
}

/// Named coins. "grover" is the two-state Grover diffusion coin (the
/// off-diagonal exchange matrix), "hadamard" the balanced real coin,
/// "identity" the trivial coin.
template <class S>
Mat2<S> coin_from_name(const std::string& name) {
    const S one = scalar_ops<S>::one();
    Mat2<S> u;
    if (name == "grover") {
        u.e[1] = one;
        u.e[2] = one;
    } else if (name == "hadamard") {
        S h;
        if constexpr (scalar_ops<S>::exact) {
            h = ExactScalar::inv_sqrt2();
        } else {
            h = S(1.0 / std::sqrt(2.0), 0.0);
        }
        u.e[0] = h;
        u.e[1] = h;
        u.e[2] = h;
        u.e[3] = -h;
    } else if (name == "identity") {
        u.e[0] = one;
        u.e[3] = one;
    } else {
        throw InvalidConfig("unknown coin name: " + name);
    }
    return u;
}

} // namespace qwalk
