#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qwalk/algebra.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

template <class S>
struct WalkConfig {
    Mat2<S> coin;
    Vec2<S> initial_state;
    std::size_t max_time = 0;
    ResourceLimits limits;

    WalkConfig(Mat2<S> coin_, Vec2<S> state, std::size_t max_time_,
               ResourceLimits limits_ = ResourceLimits::from_env())
        : coin(std::move(coin_)), initial_state(std::move(state)),
          max_time(max_time_), limits(limits_) {
        if (!is_unitary(coin)) throw NonUnitaryCoin("walk coin is not unitary");
        const S n2 = initial_state.norm2();
        if constexpr (scalar_ops<S>::exact) {
            if (n2 != scalar_ops<S>::one()) throw InvalidConfig("initial state is not unit norm");
        } else {
            if (std::abs(scalar_ops<S>::to_complex(n2).real() - 1.0) > 1e-12) {
                throw InvalidConfig("initial state is not unit norm");
            }
        }
    }
};

/// Amplitude matrices of the walk: entry (n, x) holds the summed weight of
/// all n-step paths from the origin to x, i.e. the path sum over sequences
/// with l = (n-x)/2 left and m = (n+x)/2 right moves. Slices are dense over
/// the support {-n, -n+2, ..., n}; positions of the wrong parity or outside
/// the light cone are the zero matrix.
template <class S>
class AmplitudeTable {
public:
    explicit AmplitudeTable(std::size_t max_time) : slices_(max_time + 1) {
        slices_[0] = {Mat2<S>::identity()};
    }

    std::size_t max_time() const { return slices_.size() - 1; }

    const Mat2<S>& at(std::size_t n, int x) const {
        static const Mat2<S> zero = Mat2<S>::zero();
        if (n >= slices_.size()) return zero;
        const long nn = static_cast<long>(n);
        if (x < -nn || x > nn || ((x + nn) % 2) != 0) return zero;
        return slices_[n][static_cast<std::size_t>((x + nn) / 2)];
    }

    std::vector<std::vector<Mat2<S>>>& slices() { return slices_; }

private:
    // slices_[n][idx] holds position x = 2*idx - n.
    std::vector<std::vector<Mat2<S>>> slices_;
};

/// Fills the amplitude table up to config.max_time by the one-step
/// recursion: the weight at (n+1, x) receives P times the weight at
/// (n, x+1) plus Q times the weight at (n, x-1).
template <class S>
AmplitudeTable<S> evolve_xi(const WalkConfig<S>& config) {
    if (config.max_time > config.limits.max_walk_time) {
        throw ResourceLimit("walk time " + std::to_string(config.max_time) +
                            " exceeds ceiling " + std::to_string(config.limits.max_walk_time));
    }
    const CoinSplit<S> rows = split_coin(config.coin);
    AmplitudeTable<S> table(config.max_time);
    for (std::size_t n = 0; n < config.max_time; ++n) {
        const long nn = static_cast<long>(n);
        std::vector<Mat2<S>> next(n + 2);
        for (std::size_t idx = 0; idx < n + 2; ++idx) {
            const int x = static_cast<int>(2 * static_cast<long>(idx) - nn - 1);
            // Skip the products against zero cells: outside the light cone
            // and, for sparse coins, across most of its interior.
            const Mat2<S>& from_right = table.at(n, x + 1);
            const Mat2<S>& from_left = table.at(n, x - 1);
            if (from_right.is_zero()) {
                if (!from_left.is_zero()) next[idx] = rows.q * from_left;
            } else if (from_left.is_zero()) {
                next[idx] = rows.p * from_right;
            } else {
                next[idx] = rows.p * from_right + rows.q * from_left;
            }
        }
        table.slices()[n + 1] = std::move(next);
    }
    return table;
}

/// P(X_n = x) = squared norm of (amplitude matrix at (n,x)) applied to the
/// initial state; listed over the full parity support {-n, -n+2, ..., n}.
template <class S>
std::vector<std::pair<int, S>> position_distribution(const AmplitudeTable<S>& table,
                                                     const Vec2<S>& state, std::size_t n) {
    if (n > table.max_time()) throw InvalidConfig("time exceeds computed table");
    std::vector<std::pair<int, S>> dist;
    dist.reserve(n + 1);
    const long nn = static_cast<long>(n);
    for (long x = -nn; x <= nn; x += 2) {
        const Vec2<S> v = table.at(n, static_cast<int>(x)) * state;
        dist.emplace_back(static_cast<int>(x), v.norm2());
    }
    return dist;
}

/// (1/T) sum of P(X_n = 0) over n = 1..T; real and in [0, 1].
template <class S>
S averaged_return_probability(const AmplitudeTable<S>& table, const Vec2<S>& state,
                              std::size_t t_max) {
    if (t_max > table.max_time()) throw InvalidConfig("time exceeds computed table");
    if (t_max == 0) throw InvalidConfig("averaging window must be positive");
    S acc = scalar_ops<S>::zero();
    for (std::size_t n = 1; n <= t_max; ++n) {
        const Vec2<S> v = table.at(n, 0) * state;
        acc += v.norm2();
    }
    return acc * scalar_ops<S>::inverse(scalar_ops<S>::from_int(static_cast<long>(t_max)));
}

} // namespace qwalk
