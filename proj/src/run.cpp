#include "qwalk/run.hpp"

#include <algorithm>
#include <complex>
#include <ostream>
#include <sstream>

#include "qwalk/io.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/series.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

using io::json;

template <class S>
S scalar_from(double re, double im) {
    if constexpr (scalar_ops<S>::exact) {
        return ExactScalar(Rational(re), Rational(0), Rational(im), Rational(0));
    } else {
        return S(re, im);
    }
}

template <class S>
Mat2<S> coin_of(const RunConfig& cfg) {
    if (cfg.coin_entries) {
        const auto& e = *cfg.coin_entries;
        Mat2<S> coin;
        for (int i = 0; i < 4; ++i) coin.e[i] = scalar_from<S>(e[2 * i], e[2 * i + 1]);
        if (!is_unitary(coin)) {
            throw NonUnitaryCoin("custom coin entries do not form a unitary matrix" +
                                 std::string(scalar_ops<S>::exact
                                                 ? " (exact backend checks with zero tolerance)"
                                                 : ""));
        }
        return coin;
    }
    return coin_from_name<S>(cfg.coin);
}

template <class S>
Vec2<S> state_of(const RunConfig& cfg) {
    return Vec2<S>(scalar_from<S>(cfg.initial[0], cfg.initial[1]),
                   scalar_from<S>(cfg.initial[2], cfg.initial[3]));
}

std::vector<std::pair<std::complex<double>, std::complex<double>>> evals_of(
    const RunConfig& cfg) {
    std::vector<std::pair<std::complex<double>, std::complex<double>>> evals;
    for (const auto& e : cfg.evals) {
        evals.push_back({{e[0], e[1]}, {e[2], e[3]}});
    }
    if (evals.empty()) evals.push_back({{1.0, 0.0}, {1.0, 0.0}});
    return evals;
}

long steps_or(const RunConfig& cfg, long fallback) {
    if (cfg.steps < -1) throw InvalidConfig("steps must be nonnegative");
    return cfg.steps < 0 ? fallback : cfg.steps;
}

json coin_json(const RunConfig& cfg) {
    if (cfg.coin_entries) {
        return json{{"entries_re_im", *cfg.coin_entries}};
    }
    return json{{"name", cfg.coin}};
}

template <class S>
bool weights_equal(const Mat2<S>& a, const Mat2<S>& b) {
    if constexpr (scalar_ops<S>::exact) {
        return (a - b).is_zero();
    } else {
        return detail::frobenius_distance(a, b) < 1e-9;
    }
}

std::string csv_complex(const std::complex<double>& v) {
    return io::format_double(v.real()) + "," + io::format_double(v.imag());
}

// ---------------------------------------------------------------------------
// distribution

template <class S>
std::string distribution_impl(const RunConfig& cfg) {
    const long n_max = steps_or(cfg, 100);
    const SojournConvention conv = sojourn_convention_from_string(cfg.convention);
    const Mat2<S> coin = coin_of<S>(cfg);
    const Vec2<S> state = state_of<S>(cfg);
    const WalkConfig<S> config(coin, state, static_cast<std::size_t>(n_max));
    const AmplitudeTable<S> table = evolve_xi(config);

    json audit;
    if (cfg.oracle) {
        const ResourceLimits limits = ResourceLimits::from_env();
        const std::size_t cap =
            std::min<std::size_t>(static_cast<std::size_t>(n_max), limits.max_oracle_time);
        bool match = true;
        for (std::size_t n = 0; n <= cap; ++n) {
            const OracleTables<S> oracle = oracle_tables(coin, n, conv);
            for (long x = -static_cast<long>(n); x <= static_cast<long>(n); x += 2) {
                static const Mat2<S> zero = Mat2<S>::zero();
                const auto it = oracle.xi.find(static_cast<int>(x));
                const Mat2<S>& want = it == oracle.xi.end() ? zero : it->second;
                match = match && weights_equal(table.at(n, static_cast<int>(x)), want);
            }
        }
        audit = json{{"requested_steps", n_max},
                     {"max_time_checked", cap},
                     {"xi_match", match}};
    }

    if (cfg.format == "json") {
        json rows = json::array();
        for (long n = 0; n <= n_max; ++n) {
            for (const auto& [x, prob] : position_distribution(table, state, n)) {
                json row{{"n", n},
                         {"x", x},
                         {"probability", scalar_ops<S>::to_complex(prob).real()}};
                if constexpr (scalar_ops<S>::exact) row["probability_exact"] = io::scalar_json(prob);
                rows.push_back(std::move(row));
            }
        }
        json doc{{"command", "distribution"},
                 {"backend", scalar_ops<S>::backend_name()},
                 {"coin", coin_json(cfg)},
                 {"coin_matrix", io::mat_json(coin)},
                 {"initial", cfg.initial},
                 {"steps", n_max},
                 {"rows", std::move(rows)}};
        if (cfg.oracle) doc["oracle_audit"] = audit;
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "n,x,probability\n";
    for (long n = 0; n <= n_max; ++n) {
        for (const auto& [x, prob] : position_distribution(table, state, n)) {
            out << n << ',' << x << ','
                << io::format_double(scalar_ops<S>::to_complex(prob).real()) << '\n';
        }
    }
    if (cfg.oracle) {
        out << "# section: oracle-audit (json)\n" << audit.dump() << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// sojourn

template <class S>
std::string sojourn_impl(const RunConfig& cfg) {
    const long n_max = steps_or(cfg, 20);
    const SojournConvention conv = sojourn_convention_from_string(cfg.convention);
    const Mat2<S> coin = coin_of<S>(cfg);
    const std::size_t n = static_cast<std::size_t>(n_max);

    const GammaTable<S> gamma = gamma_table(coin, n, conv);
    const PsiTable<S> psi = psi_table(coin, 0, n, conv);
    const ExcursionSequences<S> exc = first_return_excursions(coin, n);
    const RenewalReport renewal = verify_renewal(gamma, exc);

    json audit;
    if (cfg.oracle) {
        const ResourceLimits limits = ResourceLimits::from_env();
        const std::size_t cap = std::min<std::size_t>(n, limits.max_oracle_time);
        bool gamma_match = true, psi_match = true, excursion_match = true;
        for (std::size_t j = 0; j <= cap; ++j) {
            const OracleTables<S> oracle = oracle_tables(coin, j, conv);
            for (int k = 0; static_cast<std::size_t>(k) <= j; ++k) {
                static const Mat2<S> zero = Mat2<S>::zero();
                const auto it = oracle.gamma.find(k);
                const Mat2<S>& want = it == oracle.gamma.end() ? zero : it->second;
                gamma_match = gamma_match && weights_equal(gamma.at(j, k), want);
            }
            std::size_t cells_here = 0;
            for (const auto& [key, w] : psi.by_target) {
                if (std::get<0>(key) != j) continue;
                ++cells_here;
                const auto it = oracle.psi.find({std::get<1>(key), std::get<2>(key)});
                psi_match = psi_match && it != oracle.psi.end() &&
                            weights_equal(w, it->second);
            }
            psi_match = psi_match && cells_here == oracle.psi.size();
            if (j >= 2 && j % 2 == 0) {
                excursion_match = excursion_match &&
                                  weights_equal(exc.plus_at(j), oracle.f_plus) &&
                                  weights_equal(exc.minus_at(j), oracle.f_minus);
            }
        }
        audit = json{{"requested_steps", n_max},
                     {"max_time_checked", cap},
                     {"gamma_match", gamma_match},
                     {"psi_match", psi_match},
                     {"excursion_match", excursion_match}};
    }

    if (cfg.format == "json") {
        json gamma_cells = json::array();
        for (const auto& [key, m] : gamma.nonzero()) {
            gamma_cells.push_back(
                json{{"n", key.first}, {"k", key.second}, {"entries", io::mat_json(m)}});
        }
        json psi_cells = json::array();
        for (const auto& [key, m] : psi.by_target) {
            psi_cells.push_back(json{{"n", std::get<0>(key)},
                                     {"y", std::get<1>(key)},
                                     {"k", std::get<2>(key)},
                                     {"entries", io::mat_json(m)}});
        }
        json plus = json::array(), minus = json::array();
        for (std::size_t len = 2; len <= n; len += 2) {
            if (!exc.plus_at(len).is_zero()) {
                plus.push_back(json{{"length", len}, {"entries", io::mat_json(exc.plus_at(len))}});
            }
            if (!exc.minus_at(len).is_zero()) {
                minus.push_back(
                    json{{"length", len}, {"entries", io::mat_json(exc.minus_at(len))}});
            }
        }
        json doc{{"command", "sojourn"},
                 {"backend", scalar_ops<S>::backend_name()},
                 {"coin", coin_json(cfg)},
                 {"coin_matrix", io::mat_json(coin)},
                 {"convention", to_string(conv)},
                 {"steps", n_max},
                 {"gamma", json{{"max_time", n}, {"cells", std::move(gamma_cells)}}},
                 {"psi", json{{"start", 0}, {"max_time", n}, {"cells", std::move(psi_cells)}}},
                 {"excursions", json{{"plus", std::move(plus)}, {"minus", std::move(minus)}}},
                 {"renewal", io::renewal_json(renewal)}};
        if (cfg.oracle) doc["oracle_audit"] = audit;
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "# section: gamma (absent times/counts are zero; dense up to steps)\n";
    out << "n,k,i,j,re,im\n";
    for (std::size_t j = 0; j <= n; j += 2) {
        for (int k = 0; static_cast<std::size_t>(k) <= j; ++k) {
            const Mat2<S>& m = gamma.at(j, k);
            for (int e = 0; e < 4; ++e) {
                out << j << ',' << k << ',' << e / 2 << ',' << e % 2 << ','
                    << csv_complex(scalar_ops<S>::to_complex(m.e[e])) << '\n';
            }
        }
    }
    out << "# section: psi (start = 0; nonzero cells only)\n";
    out << "n,x,y,k,i,j,re,im\n";
    for (const auto& [key, m] : psi.by_target) {
        for (int e = 0; e < 4; ++e) {
            out << std::get<0>(key) << ",0," << std::get<1>(key) << ',' << std::get<2>(key)
                << ',' << e / 2 << ',' << e % 2 << ','
                << csv_complex(scalar_ops<S>::to_complex(m.e[e])) << '\n';
        }
    }
    out << "# section: excursions (nonzero lengths only)\n";
    out << "length,side,i,j,re,im\n";
    for (std::size_t len = 2; len <= n; len += 2) {
        for (const char* side : {"plus", "minus"}) {
            const Mat2<S>& m = side[0] == 'p' ? exc.plus_at(len) : exc.minus_at(len);
            if (m.is_zero()) continue;
            for (int e = 0; e < 4; ++e) {
                out << len << ',' << side << ',' << e / 2 << ',' << e % 2 << ','
                    << csv_complex(scalar_ops<S>::to_complex(m.e[e])) << '\n';
            }
        }
    }
    out << "# section: renewal-report (json)\n" << io::renewal_json(renewal).dump() << '\n';
    if (cfg.oracle) {
        out << "# section: oracle-audit (json)\n" << audit.dump() << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// genfun

template <class S>
std::string genfun_impl(const RunConfig& cfg) {
    const SojournConvention conv = sojourn_convention_from_string(cfg.convention);
    const Mat2<S> coin = coin_of<S>(cfg);
    const auto evals = evals_of(cfg);

    // Matrix and scalar sides keep separate default truncations; an explicit
    // --truncation overrides both.
    const int mat_z = cfg.order_z < 0 ? 100 : cfg.order_z;
    const int mat_t = cfg.order_t < 0 ? 100 : cfg.order_t;
    const int sc_z = cfg.order_z < 0 ? 200 : cfg.order_z;
    const int sc_t = cfg.order_t < 0 ? 200 : cfg.order_t;
    if (mat_z < 0 || mat_t < 0) throw InvalidConfig("truncation orders must be nonnegative");

    const std::size_t gamma_depth = static_cast<std::size_t>(mat_z - mat_z % 2);
    const GammaTable<S> gamma = gamma_table(coin, gamma_depth, conv);
    const BiSeries<Mat2<S>> gamma_bar = gamma_bar_direct(gamma, mat_z, mat_t);
    const DiagnosticsReport gamma_diag = convergence_diagnostics(gamma_bar, evals);

    const auto aggregated =
        psi_aggregated_table(coin, 0, static_cast<std::size_t>(sc_z), conv);
    const CoinSplit<S> rows = split_coin(coin);
    const CoinBasis<S> basis = build_basis(rows.p, rows.q);
    const PsiCoefficients<S> coeffs = decompose_psi(aggregated, basis);

    struct Stream {
        const char* name;
        const std::map<std::pair<std::size_t, int>, S>* table;
    };
    const Stream streams[] = {
        {"p", &coeffs.p}, {"q", &coeffs.q}, {"r", &coeffs.r}, {"s", &coeffs.s}};

    std::vector<std::pair<std::string, BiSeries<S>>> u_bars;
    std::vector<std::pair<std::string, DiagnosticsReport>> u_diags;
    for (const Stream& stream : streams) {
        BiSeries<S> u_bar = symmetrize(series_from_table(*stream.table, sc_z, sc_t));
        u_diags.push_back({stream.name, convergence_diagnostics(u_bar, evals)});
        u_bars.push_back({stream.name, std::move(u_bar)});
    }

    json diagnostics{{"symmetrized", true},
                     {"normalization", "4x"},
                     {"gamma_bar", io::diagnostics_json(gamma_diag)}};
    for (const auto& [name, diag] : u_diags) diagnostics[name] = io::diagnostics_json(diag);

    if (cfg.format == "json") {
        json gamma_coeffs = json::array();
        for (const auto& [ij, m] : gamma_bar.coefficients()) {
            gamma_coeffs.push_back(
                json{{"n", ij.first}, {"k", ij.second}, {"entries", io::mat_json(m)}});
        }
        json u_bar_json;
        for (const auto& [name, series] : u_bars) {
            json coeffs_json = json::array();
            for (const auto& [ij, v] : series.coefficients()) {
                coeffs_json.push_back(
                    json{{"n", ij.first}, {"k", ij.second}, {"value", io::scalar_json(v)}});
            }
            u_bar_json[name] = json{{"coefficients", std::move(coeffs_json)}};
        }
        json doc{{"command", "genfun"},
                 {"backend", scalar_ops<S>::backend_name()},
                 {"coin", coin_json(cfg)},
                 {"coin_matrix", io::mat_json(coin)},
                 {"convention", to_string(conv)},
                 {"orders", json{{"matrix", {mat_z, mat_t}}, {"scalar", {sc_z, sc_t}}}},
                 {"gamma_bar", json{{"coefficients", std::move(gamma_coeffs)}}},
                 {"u_bar", std::move(u_bar_json)},
                 {"diagnostics", std::move(diagnostics)}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "# section: gamma-bar (n = z degree, k = t degree; nonzero only)\n";
    out << "n,k,i,j,re,im\n";
    for (const auto& [ij, m] : gamma_bar.coefficients()) {
        for (int e = 0; e < 4; ++e) {
            out << ij.first << ',' << ij.second << ',' << e / 2 << ',' << e % 2 << ','
                << csv_complex(scalar_ops<S>::to_complex(m.e[e])) << '\n';
        }
    }
    for (const auto& [name, series] : u_bars) {
        out << "# section: u-bar-" << name << " (n = z degree, k = t degree; nonzero only)\n";
        out << "n,k,re,im\n";
        for (const auto& [ij, v] : series.coefficients()) {
            out << ij.first << ',' << ij.second << ','
                << csv_complex(scalar_ops<S>::to_complex(v)) << '\n';
        }
    }
    out << "# section: diagnostics (json)\n" << diagnostics.dump() << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// scan

ScanFamily parse_family(const std::string& text) {
    ScanFamily family;
    const auto colon = text.find(':');
    family.kind = colon == std::string::npos ? text : text.substr(0, colon);
    if (family.kind == "named") {
        if (colon == std::string::npos) {
            family.names = {"grover", "hadamard", "identity"};
        } else {
            std::string rest = text.substr(colon + 1);
            std::size_t pos = 0;
            while (pos <= rest.size()) {
                const auto comma = rest.find(',', pos);
                const std::string name =
                    rest.substr(pos, comma == std::string::npos ? rest.size() - pos
                                                                : comma - pos);
                if (name.empty()) throw InvalidConfig("empty coin name in family list");
                family.names.push_back(name);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
    } else if (family.kind != "off-diagonal" && family.kind != "random-unitary") {
        throw InvalidConfig("unknown scan family: " + family.kind);
    } else if (colon != std::string::npos) {
        throw InvalidConfig("only the named family takes a coin list");
    }
    return family;
}

std::string scan_impl(const RunConfig& cfg) {
    const ScanFamily family = parse_family(cfg.family);
    ScanSettings settings;
    settings.sojourn_time = static_cast<std::size_t>(steps_or(cfg, 40));
    settings.grid_size = cfg.grid_size;
    settings.flat_tol = cfg.tol;
    const std::vector<ScanReport> rows = conjecture_scan(family, cfg.count, cfg.seed, settings);

    if (cfg.format == "json") {
        json doc = io::scan_json(rows);
        doc["command"] = "scan";
        doc["family"] = cfg.family;
        doc["count"] = cfg.count;
        doc["seed"] = cfg.seed;
        doc["settings"] = json{{"sojourn_time", settings.sojourn_time},
                               {"return_time", settings.return_time},
                               {"grid_size", settings.grid_size},
                               {"flat_tol", settings.flat_tol}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "index,family,label,u00_re,u00_im,u01_re,u01_im,u10_re,u10_im,u11_re,u11_im,"
           "flat_band,max_deviation,decay_class,divergent,avg_return_probability,"
           "conjecture_consistent\n";
    std::size_t consistent = 0;
    for (const ScanReport& row : rows) {
        out << row.index << ',' << row.family << ',' << row.label;
        for (const double v : row.coin) out << ',' << io::format_double(v);
        out << ',' << (row.flat_band ? "true" : "false") << ','
            << io::format_double(row.max_deviation) << ',' << row.decay_class << ','
            << (row.divergent ? "true" : "false") << ','
            << io::format_double(row.avg_return_probability) << ','
            << (row.conjecture_consistent ? "true" : "false") << '\n';
        consistent += row.conjecture_consistent ? 1 : 0;
    }
    out << "# summary: rows=" << rows.size() << " consistent=" << consistent
        << " counterexample_candidates=" << rows.size() - consistent << '\n';
    return out.str();
}

} // namespace

std::string render_output(const RunConfig& cfg) {
    if (cfg.backend != "exact" && cfg.backend != "float") {
        throw InvalidConfig("unknown backend: " + cfg.backend);
    }
    if (cfg.format != "csv" && cfg.format != "json") {
        throw InvalidConfig("unknown format: " + cfg.format);
    }
    const bool exact = cfg.backend == "exact";
    if (cfg.command == "distribution") {
        return exact ? distribution_impl<ExactScalar>(cfg) : distribution_impl<FloatScalar>(cfg);
    }
    if (cfg.command == "sojourn") {
        return exact ? sojourn_impl<ExactScalar>(cfg) : sojourn_impl<FloatScalar>(cfg);
    }
    if (cfg.command == "genfun") {
        return exact ? genfun_impl<ExactScalar>(cfg) : genfun_impl<FloatScalar>(cfg);
    }
    if (cfg.command == "scan") {
        return scan_impl(cfg); // spectral sampling is float-only by nature
    }
    throw InvalidConfig("unknown command: " + cfg.command);
}

int run_command(const RunConfig& cfg, std::ostream& err) {
    try {
        io::atomic_write(cfg.output, render_output(cfg));
        return 0;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientOrder& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const TruncationOverflow& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace qwalk
