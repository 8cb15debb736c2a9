#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qwalk {

/// Parsed command-line configuration. The defaults reproduce the reference
/// setting end to end: exchange coin, initial state [0, i]^T, exact
/// arithmetic, midpoint interval counting.
struct RunConfig {
    std::string command;                // distribution | sojourn | genfun | scan
    std::string coin = "grover";        // named coin; ignored when entries are set
    std::optional<std::array<double, 8>> coin_entries; // re,im per entry, row-major
    std::array<double, 4> initial = {0.0, 0.0, 0.0, 1.0}; // re0,im0,re1,im1
    std::string backend = "exact";      // exact | float
    long steps = -1;                    // -1: per-command default
    std::string convention = "midpoint";
    int order_z = -1;                   // series truncation; -1: per-command default
    int order_t = -1;
    int grid_size = 1024;
    double tol = 1e-9;
    std::uint64_t seed = 7;
    std::string family = "off-diagonal"; // scan family; "named[:a,b,...]" selects coins
    int count = 20;
    std::vector<std::array<double, 4>> evals; // z_re,z_im,t_re,t_im per point
    std::string format = "csv";         // csv | json
    std::string output = "-";           // file path, or "-" for stdout
    bool oracle = false;                // attach the exhaustive-enumeration audit
};

/// Renders the configured command's complete output (CSV or JSON) without
/// touching the filesystem. Throws the module exception types on bad input.
std::string render_output(const RunConfig& config);

/// Full command run: render, then write atomically to config.output.
/// Failures are reported on err and mapped to the exit-code contract:
///   0 success; 1 invalid configuration; 2 resource or order limit exceeded.
int run_command(const RunConfig& config, std::ostream& err);

} // namespace qwalk
