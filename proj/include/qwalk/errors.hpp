#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A user-supplied coin failed the unitarity check.
struct NonUnitaryCoin : Error {
    using Error::Error;
};

/// Gram-Schmidt completion could not produce two further unit vectors.
struct DegenerateBasis : Error {
    using Error::Error;
};

/// A requested computation exceeds the configured ceilings.
struct ResourceLimit : Error {
    using Error::Error;
};

/// A coefficient table does not fit inside the requested truncation orders.
struct TruncationOverflow : Error {
    using Error::Error;
};

/// Formal inversion of I - X requires X to have a vanishing constant term.
struct NonNilpotentConstantTerm : Error {
    using Error::Error;
};

/// Convergence diagnostics need at least a minimum number of orders.
struct InsufficientOrder : Error {
    using Error::Error;
};

/// A sampled coin failed the unitarity check (defensive; should not happen).
struct NonUnitarySample : Error {
    using Error::Error;
};

/// Command-line configuration rejected before any computation starts.
struct InvalidConfig : Error {
    using Error::Error;
};

/// Ceilings guarding against accidental huge runs. The walk recursion is
/// O(N^2) matrix products, the sojourn tables O(N^3); the oracle enumerates
/// 2^n paths and is hard-capped.
struct ResourceLimits {
    std::size_t max_walk_time = 10000;
    std::size_t max_sojourn_time = 2000;
    std::size_t max_oracle_time = 20;

    /// QWALK_RESOURCE_CEILING overrides the walk and sojourn ceilings
    /// (the oracle cap stays at 20: 2^n memory).
    static ResourceLimits from_env() {
        ResourceLimits limits;
        if (const char* raw = std::getenv("QWALK_RESOURCE_CEILING")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(raw, &end, 10);
            if (end != raw && v > 0) {
                limits.max_walk_time = static_cast<std::size_t>(v);
                limits.max_sojourn_time = static_cast<std::size_t>(v);
            }
        }
        return limits;
    }
};

} // namespace qwalk
