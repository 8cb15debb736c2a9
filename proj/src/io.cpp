#include "qwalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace qwalk::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json scalar_json(const ExactScalar& v) {
    const std::complex<double> f = v.to_complex();
    return json{{"a", v.a.str()}, {"b", v.b.str()}, {"c", v.c.str()}, {"d", v.d.str()},
                {"re", f.real()}, {"im", f.imag()}};
}

json scalar_json(const std::complex<double>& v) {
    return json{{"re", v.real()}, {"im", v.imag()}};
}

ExactScalar exact_scalar_from_json(const json& j) {
    return ExactScalar(Rational(j.at("a").get<std::string>()),
                       Rational(j.at("b").get<std::string>()),
                       Rational(j.at("c").get<std::string>()),
                       Rational(j.at("d").get<std::string>()));
}

std::complex<double> float_scalar_from_json(const json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json renewal_json(const RenewalReport& report) {
    json cells = json::array();
    for (const auto& cell : report.cells) {
        cells.push_back(json{{"n", cell.n},
                             {"k", cell.k},
                             {"residual_right", cell.residual_right},
                             {"residual_left", cell.residual_left},
                             {"residual_fitted", cell.residual_fitted}});
    }
    json bases = json::array();
    for (const auto& cmp : report.base_comparison) {
        bases.push_back(json{{"length", cmp.length},
                             {"computed_plus_norm", cmp.computed_plus_norm},
                             {"computed_minus_norm", cmp.computed_minus_norm},
                             {"pattern_mismatch_plus", cmp.pattern_mismatch_plus},
                             {"pattern_mismatch_minus", cmp.pattern_mismatch_minus}});
    }
    return json{{"max_time", report.max_time},
                {"convention", report.convention},
                {"max_residual_right", report.max_residual_right},
                {"max_residual_left", report.max_residual_left},
                {"max_residual_fitted", report.max_residual_fitted},
                {"right_order_exact", report.right_order_exact},
                {"left_order_exact", report.left_order_exact},
                {"matched_order", report.matched_order},
                {"odd_support_cells", report.odd_support_cells},
                {"cells", std::move(cells)},
                {"base_comparison", std::move(bases)}};
}

namespace {

json sequence_json(const SequenceDiagnostics& seq) {
    return json{{"norms", seq.norms},
                {"radius", std::isinf(seq.radius) ? json("inf") : json(seq.radius)},
                {"decay", to_string(seq.decay)}};
}

json eval_json(const EvalPointDiagnostics& ev) {
    return json{{"z", {ev.z.real(), ev.z.imag()}},
                {"t", {ev.t.real(), ev.t.imag()}},
                {"term_norms", ev.term_norms},
                {"partial_sum_norms", ev.partial_sum_norms},
                {"growth_ratio", ev.growth_ratio},
                {"second_half_monotone", ev.second_half_monotone},
                {"term_decay", to_string(ev.term_decay)},
                {"divergent", ev.divergent},
                {"trigger", ev.trigger}};
}

} // namespace

json diagnostics_json(const DiagnosticsReport& report) {
    json entries = json::array();
    for (const auto& entry : report.entries) {
        json evals = json::array();
        for (const auto& ev : entry.evals) evals.push_back(eval_json(ev));
        entries.push_back(json{{"row", entry.row},
                               {"col", entry.col},
                               {"diagonal", sequence_json(entry.diagonal)},
                               {"t_zero", sequence_json(entry.t_zero)},
                               {"decay", to_string(entry.decay)},
                               {"evals", std::move(evals)}});
    }
    return json{{"order_z", report.order_z},
                {"order_t", report.order_t},
                {"overall_decay", to_string(report.overall_decay)},
                {"any_divergent", report.any_divergent},
                {"entries", std::move(entries)}};
}

json scan_row_json(const ScanReport& row) {
    return json{{"index", row.index},
                {"family", row.family},
                {"label", row.label},
                {"coin", row.coin},
                {"flat_band", row.flat_band},
                {"max_deviation", row.max_deviation},
                {"decay_class", row.decay_class},
                {"divergent", row.divergent},
                {"avg_return_probability", row.avg_return_probability},
                {"conjecture_consistent", row.conjecture_consistent}};
}

json scan_json(const std::vector<ScanReport>& rows) {
    json out = json::array();
    std::size_t consistent = 0;
    for (const auto& row : rows) {
        out.push_back(scan_row_json(row));
        consistent += row.conjecture_consistent ? 1 : 0;
    }
    return json{{"rows", std::move(out)},
                {"summary", json{{"rows", rows.size()},
                                 {"consistent", consistent},
                                 {"counterexample_candidates", rows.size() - consistent}}}};
}

void atomic_write(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

} // namespace qwalk::io
