#include <algorithm>
#include <array>
#include <cstddef>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qwalk/run.hpp"

namespace {

std::vector<double> parse_csv_doubles(const std::string& text, std::size_t expected,
                                      const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        std::size_t used = 0;
        try {
            out.push_back(std::stod(piece, &used));
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != piece.size()) {
            throw std::runtime_error(flag + ": '" + piece + "' is not a number");
        }
    }
    if (out.size() != expected) {
        throw std::runtime_error(flag + " expects " + std::to_string(expected) +
                                 " comma-separated values, got " + std::to_string(out.size()));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator and analysis toolkit for one-dimensional two-state "
                 "quantum walks: position distributions, sojourn-time weight tables, "
                 "bivariate generating functions with divergence diagnostics, and a "
                 "flat-band localization scan."};
    app.require_subcommand(1);

    qwalk::RunConfig cfg;
    std::string coin_entries, initial, truncation;
    std::vector<std::string> evals;

    const auto add_flags = [&](CLI::App* cmd) {
        cmd->add_option("--coin", cfg.coin, "Named coin: grover | hadamard | identity")
            ->capture_default_str();
        cmd->add_option("--coin-entries", coin_entries,
                        "Custom coin re0,im0,re1,im1,re2,im2,re3,im3 (row-major; overrides "
                        "--coin; must be unitary under the selected backend)");
        cmd->add_option("--initial", initial,
                        "Initial chirality state re0,im0,re1,im1 (default 0,0,0,1)");
        cmd->add_option("--backend", cfg.backend, "Arithmetic backend: exact | float")
            ->capture_default_str();
        cmd->add_option("--steps", cfg.steps,
                        "Time horizon (defaults: distribution 100, sojourn 20, scan 40)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--convention", cfg.convention,
                        "Sojourn interval counting: midpoint | endpoint")
            ->capture_default_str();
        cmd->add_option("--truncation", truncation,
                        "Series truncation orders NZ,NT (defaults: matrix 100,100; "
                        "scalar 200,200)");
        cmd->add_option("--grid", cfg.grid_size, "Momentum grid size for spectral scans")
            ->capture_default_str();
        cmd->add_option("--tol", cfg.tol, "Band-flatness tolerance")->capture_default_str();
        cmd->add_option("--seed", cfg.seed, "Seed for the coin sampler")->capture_default_str();
        cmd->add_option("--family", cfg.family,
                        "Scan family: off-diagonal | random-unitary | named[:a,b,...]")
            ->capture_default_str();
        cmd->add_option("--count", cfg.count, "Number of sampled coins for scan")
            ->capture_default_str();
        cmd->add_option("--eval", evals,
                        "Series evaluation point z_re,z_im,t_re,t_im (repeatable; "
                        "default 1,0,1,0)");
        cmd->add_option("--format", cfg.format, "Output format: csv | json")
            ->capture_default_str();
        cmd->add_option("--output", cfg.output, "Output path, or - for stdout")
            ->capture_default_str();
        cmd->add_flag("--oracle", cfg.oracle,
                      "Attach an exhaustive path-enumeration audit of the tables "
                      "(horizons capped at the enumeration ceiling)");
    };

    add_flags(app.add_subcommand("distribution",
                                 "Position distribution P(X_n = x) for n = 0..steps"));
    add_flags(app.add_subcommand("sojourn",
                                 "Sojourn-resolved return/transport weight tables, "
                                 "excursions, and the renewal-identity report"));
    add_flags(app.add_subcommand("genfun",
                                 "Generating-function coefficient tables and "
                                 "convergence/divergence diagnostics"));
    add_flags(app.add_subcommand("scan",
                                 "Flat-band vs divergence audit over sampled coins"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!coin_entries.empty()) {
            const auto v = parse_csv_doubles(coin_entries, 8, "--coin-entries");
            std::array<double, 8> entries{};
            std::copy(v.begin(), v.end(), entries.begin());
            cfg.coin_entries = entries;
        }
        if (!initial.empty()) {
            const auto v = parse_csv_doubles(initial, 4, "--initial");
            std::copy(v.begin(), v.end(), cfg.initial.begin());
        }
        if (!truncation.empty()) {
            const auto v = parse_csv_doubles(truncation, 2, "--truncation");
            if (v[0] < 0 || v[1] < 0 || v[0] != static_cast<int>(v[0]) ||
                v[1] != static_cast<int>(v[1])) {
                throw std::runtime_error("--truncation expects two nonnegative integers");
            }
            cfg.order_z = static_cast<int>(v[0]);
            cfg.order_t = static_cast<int>(v[1]);
        }
        for (const std::string& text : evals) {
            const auto v = parse_csv_doubles(text, 4, "--eval");
            cfg.evals.push_back({v[0], v[1], v[2], v[3]});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    return qwalk::run_command(cfg, std::cerr);
}
