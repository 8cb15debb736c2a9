#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "qwalk/diagnostics.hpp"
#include "qwalk/series.hpp"
#include "qwalk/sojourn.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace py = pybind11;

namespace {

using C = std::complex<double>;
using qwalk::CMat2;

/// A coin argument is either a named coin or four complex entries row-major.
CMat2 coin_arg(const py::object& given) {
    if (py::isinstance<py::str>(given)) {
        return qwalk::coin_from_name<C>(given.cast<std::string>());
    }
    const auto entries = given.cast<std::vector<C>>();
    if (entries.size() != 4) {
        throw qwalk::InvalidConfig("a coin needs exactly 4 complex entries");
    }
    CMat2 coin;
    for (int i = 0; i < 4; ++i) coin.e[i] = entries[i];
    return coin;
}

qwalk::Vec2<C> state_arg(const std::pair<C, C>& initial) {
    return qwalk::Vec2<C>(initial.first, initial.second);
}

std::vector<C> entries_of(const CMat2& m) { return {m.e[0], m.e[1], m.e[2], m.e[3]}; }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulator and analysis toolkit for one-dimensional two-state quantum "
              "walks: position distributions, sojourn-time weight tables, generating-"
              "function divergence diagnostics, and flat-band localization scans "
              "(float backend; the command-line tool adds exact arithmetic).";

#ifdef QWALK_VERSION_INFO
    m.attr("__version__") = QWALK_VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif

    m.def(
        "distribution",
        [](const py::object& coin, long steps, const std::pair<C, C>& initial) {
            const CMat2 u = coin_arg(coin);
            const auto state = state_arg(initial);
            const qwalk::WalkConfig<C> config(u, state, static_cast<std::size_t>(steps));
            const auto table = qwalk::evolve_xi(config);
            std::vector<std::tuple<long, int, double>> rows;
            for (long n = 0; n <= steps; ++n) {
                for (const auto& [x, prob] : qwalk::position_distribution(table, state, n)) {
                    rows.emplace_back(n, x, prob.real());
                }
            }
            return rows;
        },
        py::arg("coin"), py::arg("steps"), py::arg("initial") = std::pair<C, C>{C(0, 0), C(0, 1)},
        "Position distribution rows (n, x, P(X_n = x)) for n = 0..steps.");

    m.def(
        "average_return_probability",
        [](const py::object& coin, long t, const std::pair<C, C>& initial) {
            const CMat2 u = coin_arg(coin);
            const auto state = state_arg(initial);
            const qwalk::WalkConfig<C> config(u, state, static_cast<std::size_t>(t));
            const auto table = qwalk::evolve_xi(config);
            return qwalk::averaged_return_probability(table, state, static_cast<std::size_t>(t))
                .real();
        },
        py::arg("coin"), py::arg("t"), py::arg("initial") = std::pair<C, C>{C(0, 0), C(0, 1)},
        "Time-averaged probability of finding the walker at the origin over 1..t.");

    m.def(
        "gamma",
        [](const py::object& coin, long steps, const std::string& convention) {
            const auto table = qwalk::gamma_table(
                coin_arg(coin), static_cast<std::size_t>(steps),
                qwalk::sojourn_convention_from_string(convention));
            std::vector<std::tuple<std::size_t, int, std::vector<C>>> rows;
            for (const auto& [key, mat] : table.nonzero()) {
                rows.emplace_back(key.first, key.second, entries_of(mat));
            }
            return rows;
        },
        py::arg("coin"), py::arg("steps"), py::arg("convention") = "midpoint",
        "Nonzero sojourn-resolved return weights as (n, k, entries) rows.");

    m.def(
        "psi",
        [](const py::object& coin, long steps, const std::string& convention, int start) {
            const auto table = qwalk::psi_table(
                coin_arg(coin), start, static_cast<std::size_t>(steps),
                qwalk::sojourn_convention_from_string(convention));
            std::vector<std::tuple<std::size_t, int, int, std::vector<C>>> rows;
            for (const auto& [key, mat] : table.by_target) {
                rows.emplace_back(std::get<0>(key), std::get<1>(key), std::get<2>(key),
                                  entries_of(mat));
            }
            return rows;
        },
        py::arg("coin"), py::arg("steps"), py::arg("convention") = "midpoint",
        py::arg("start") = 0,
        "Nonzero sojourn-resolved transport weights as (n, y, k, entries) rows.");

    m.def(
        "divergence",
        [](const py::object& coin, int order_z, int order_t, const std::string& convention,
           C z, C t) {
            const std::size_t depth = static_cast<std::size_t>(order_z - order_z % 2);
            const auto gamma = qwalk::gamma_table(
                coin_arg(coin), depth, qwalk::sojourn_convention_from_string(convention));
            const auto series = qwalk::gamma_bar_direct(gamma, order_z, order_t);
            const auto report = qwalk::convergence_diagnostics(series, {{z, t}});
            py::dict out;
            out["decay_class"] = std::string(qwalk::to_string(report.overall_decay));
            out["divergent"] = report.any_divergent;
            out["order_z"] = report.order_z;
            out["order_t"] = report.order_t;
            return out;
        },
        py::arg("coin"), py::arg("order_z") = 40, py::arg("order_t") = 40,
        py::arg("convention") = "midpoint", py::arg("z") = C(1, 0), py::arg("t") = C(1, 0),
        "Coefficient-trend and partial-sum divergence diagnostic of the return-path "
        "generating function at one evaluation point.");

    m.def(
        "flatness",
        [](const py::object& coin, int grid_size, double tol) {
            const auto result = qwalk::flatness_scan(coin_arg(coin), grid_size, tol);
            return std::make_pair(result.flat, result.max_deviation);
        },
        py::arg("coin"), py::arg("grid_size") = 1024, py::arg("tol") = 1e-9,
        "Momentum-space band flatness: (flat, max deviation from the k = 0 bands).");

    m.def(
        "scan",
        [](const std::string& family, int count, std::uint64_t seed,
           const std::vector<std::string>& names, long sojourn_time, long return_time,
           int grid_size, double tol) {
            qwalk::ScanFamily fam;
            fam.kind = family;
            fam.names = names;
            if (fam.kind == "named" && fam.names.empty()) {
                fam.names = {"grover", "hadamard", "identity"};
            }
            qwalk::ScanSettings settings;
            settings.sojourn_time = static_cast<std::size_t>(sojourn_time);
            settings.return_time = static_cast<std::size_t>(return_time);
            settings.grid_size = grid_size;
            settings.flat_tol = tol;
            py::list rows;
            for (const auto& r : qwalk::conjecture_scan(fam, count, seed, settings)) {
                py::dict row;
                row["index"] = r.index;
                row["family"] = r.family;
                row["label"] = r.label;
                row["coin"] = r.coin;
                row["flat_band"] = r.flat_band;
                row["max_deviation"] = r.max_deviation;
                row["decay_class"] = r.decay_class;
                row["divergent"] = r.divergent;
                row["avg_return_probability"] = r.avg_return_probability;
                row["conjecture_consistent"] = r.conjecture_consistent;
                rows.append(std::move(row));
            }
            return rows;
        },
        py::arg("family") = "off-diagonal", py::arg("count") = 8, py::arg("seed") = 7,
        py::arg("names") = std::vector<std::string>{}, py::arg("sojourn_time") = 24,
        py::arg("return_time") = 100, py::arg("grid_size") = 512, py::arg("tol") = 1e-9,
        "Reproducible flat-band vs divergence audit over sampled coins.");
}
