#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/algebra.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

/// Interval-counting rule for sojourn times: how many of the unit time
/// intervals [j-1, j] a trajectory spends to the right of the origin.
///   midpoint: interval counts iff x_{j-1} + x_j > 0. For +/-1 steps the sum
///             is odd, never zero, so every interval is classified.
///   endpoint: interval counts iff x_j > 0.
enum class SojournConvention { midpoint, endpoint };

inline const char* to_string(SojournConvention c) {
    return c == SojournConvention::midpoint ? "midpoint" : "endpoint";
}

inline SojournConvention sojourn_convention_from_string(const std::string& s) {
    if (s == "midpoint") return SojournConvention::midpoint;
    if (s == "endpoint") return SojournConvention::endpoint;
    throw InvalidConfig("unknown sojourn convention: " + s);
}

/// 1 if the time interval [j-1, j] with positions (x_prev -> x_next) counts
/// as right of the origin under the convention, else 0.
inline int sojourn_increment(SojournConvention conv, int x_prev, int x_next) {
    if (conv == SojournConvention::midpoint) return (x_prev + x_next) > 0 ? 1 : 0;
    return x_next > 0 ? 1 : 0;
}

/// One fully expanded walk path.
template <class S>
struct PathRecord {
    std::string steps;          // step j is steps[j-1], 'L' or 'R'
    std::vector<int> positions; // x_0 .. x_n
    Mat2<S> weight;             // time-ordered product, newest factor leftmost
    int sojourn = 0;            // interval count under the requested convention
};

inline constexpr std::size_t kOraclePathCap = 20;

namespace detail {

inline void check_oracle_time(std::size_t n) {
    if (n > kOraclePathCap) {
        throw ResourceLimit("path enumeration capped at time " +
                            std::to_string(kOraclePathCap) + ", requested " +
                            std::to_string(n));
    }
}

} // namespace detail

/// Walks all 2^n step sequences of length n starting at `start`, invoking
///   visit(steps, positions, weight, sojourn)
/// for each. Weights are built incrementally along a depth-first tree whose
/// branches are visited L before R, so the visit order is lexicographic in
/// the step string and deterministic.
template <class S, class Visitor>
void for_each_path(const Mat2<S>& coin, std::size_t n, int start,
                   SojournConvention conv, Visitor&& visit) {
    detail::check_oracle_time(n);
    const CoinSplit<S> rows = split_coin(coin);

    std::vector<Mat2<S>> prefix(n + 1);
    prefix[0] = Mat2<S>::identity();
    std::vector<int> pos(n + 1, start);
    std::vector<int> kcount(n + 1, 0);
    std::string steps(n, 'L');

    // Explicit iterative DFS: depth d holds the pending branch for step d+1
    // (0 = left still to do, 1 = right still to do, 2 = exhausted).
    std::vector<int> branch(n + 1, 0);
    std::size_t d = 0;
    while (true) {
        if (d == n) {
            visit(static_cast<const std::string&>(steps), pos, prefix[n], kcount[n]);
            if (n == 0) return;
            --d;
            continue;
        }
        if (branch[d] == 2) {
            branch[d] = 0;
            if (d == 0) return;
            --d;
            continue;
        }
        const bool right = branch[d] == 1;
        ++branch[d];
        steps[d] = right ? 'R' : 'L';
        pos[d + 1] = pos[d] + (right ? 1 : -1);
        kcount[d + 1] = kcount[d] + sojourn_increment(conv, pos[d], pos[d + 1]);
        prefix[d + 1] = (right ? rows.q : rows.p) * prefix[d];
        ++d;
    }
}

/// Materializes all 2^n path records. Prefer for_each_path / oracle_tables
/// for large n; the full list is memory-heavy.
template <class S>
std::vector<PathRecord<S>> enumerate_paths(const Mat2<S>& coin, std::size_t n,
                                           int start, SojournConvention conv) {
    std::vector<PathRecord<S>> records;
    records.reserve(n <= 24 ? (std::size_t{1} << n) : 0);
    for_each_path(coin, n, start, conv,
                  [&](const std::string& steps, const std::vector<int>& positions,
                      const Mat2<S>& weight, int k) {
                      records.push_back(PathRecord<S>{steps, positions, weight, k});
                  });
    return records;
}

/// Ground-truth aggregates at a single time n, in the shapes produced by the
/// dynamic-programming modules. gamma / excursion slices are populated only
/// when start == 0 (they are defined for return paths to the origin).
template <class S>
struct OracleTables {
    std::size_t time = 0;
    int start = 0;
    SojournConvention convention = SojournConvention::midpoint;

    std::map<int, Mat2<S>> xi;                      // endpoint -> summed weight
    std::map<int, Mat2<S>> gamma;                   // sojourn k -> weight, endpoint 0
    std::map<std::pair<int, int>, Mat2<S>> psi;     // (endpoint, k) -> weight
    std::map<int, Mat2<S>> psi_aggregated;          // k -> weight, summed over endpoints
    Mat2<S> f_plus;   // return paths strictly positive in between
    Mat2<S> f_minus;  // return paths strictly negative in between
};

template <class S>
OracleTables<S> oracle_tables(const Mat2<S>& coin, std::size_t n,
                              SojournConvention conv, int start = 0) {
    OracleTables<S> tables;
    tables.time = n;
    tables.start = start;
    tables.convention = conv;

    auto add_into = [](Mat2<S>& slot, const Mat2<S>& w) { slot += w; };

    for_each_path(coin, n, start, conv,
                  [&](const std::string&, const std::vector<int>& positions,
                      const Mat2<S>& weight, int k) {
                      if (weight.is_zero()) return;
                      const int y = positions.back();
                      add_into(tables.xi[y], weight);
                      add_into(tables.psi[{y, k}], weight);
                      add_into(tables.psi_aggregated[k], weight);
                      if (start == 0 && y == 0) {
                          add_into(tables.gamma[k], weight);
                          if (n >= 2) {
                              bool all_pos = true, all_neg = true;
                              for (std::size_t j = 1; j + 1 < positions.size(); ++j) {
                                  all_pos = all_pos && positions[j] > 0;
                                  all_neg = all_neg && positions[j] < 0;
                              }
                              if (all_pos) tables.f_plus += weight;
                              if (all_neg) tables.f_minus += weight;
                          }
                      }
                  });

    // Drop aggregates that cancelled to zero so sparsity comparisons with
    // the DP tables are exact.
    std::erase_if(tables.xi, [](const auto& kv) { return kv.second.is_zero(); });
    std::erase_if(tables.gamma, [](const auto& kv) { return kv.second.is_zero(); });
    std::erase_if(tables.psi, [](const auto& kv) { return kv.second.is_zero(); });
    std::erase_if(tables.psi_aggregated, [](const auto& kv) { return kv.second.is_zero(); });
    return tables;
}

} // namespace qwalk
