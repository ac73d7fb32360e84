#pragma once

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdmap/channel.hpp"
#include "rdmap/complex_matrix.hpp"
#include "rdmap/conditions.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/monotones.hpp"
#include "rdmap/state.hpp"
#include "rdmap/suite.hpp"

// JSON formats:
//   state    {"dim": n, "dims": [a, b]?, "matrix": [[[re, im], ...], ...]}
//   channel  {"label": s, "dim_in": n, "dim_out": m, "kraus": [matrix, ...]}
//   twirl    {"unitaries": [matrix, ...]}
// Scan tables go out as CSV: epsilon,value_bits,jump_flag.

namespace rdmap {

using json = nlohmann::json;

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw Error(Errc::bad_file, std::string(what) + ": matrix must be a nonempty array");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw Error(Errc::bad_file, std::string(what) + ": matrix rows must be arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error(Errc::bad_file, std::string(what) + ": ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw Error(Errc::bad_file,
                            std::string(what) + ": entries must be [re, im] pairs");
            m(i, c) = cplx{e[0].get<double>(), e[1].get<double>()};
        }
    }
    return m;
}

inline json state_to_json(const DensityMatrix& rho) {
    json j;
    j["dim"] = rho.dim();
    if (rho.dims()) j["dims"] = {rho.dims()->a, rho.dims()->b};
    j["matrix"] = matrix_to_json(rho.matrix());
    return j;
}

inline DensityMatrix state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrix"))
        throw Error(Errc::bad_file, "state: missing 'matrix'");
    const ComplexMatrix m = matrix_from_json(j["matrix"], "state");
    std::optional<BipartiteDims> dims;
    if (j.contains("dims")) {
        const json& d = j["dims"];
        if (!d.is_array() || d.size() != 2 || !d[0].is_number_unsigned() ||
            !d[1].is_number_unsigned())
            throw Error(Errc::bad_file, "state: 'dims' must be [a, b]");
        dims = BipartiteDims{d[0].get<std::size_t>(), d[1].get<std::size_t>()};
    }
    if (j.contains("dim") && j["dim"].get<std::size_t>() != m.rows())
        throw Error(Errc::bad_file, "state: 'dim' disagrees with matrix size");
    return make_density(m, dims);
}

inline json channel_to_json(const KrausChannel& ch) {
    json j;
    j["label"] = ch.label();
    j["dim_in"] = ch.dim_in();
    j["dim_out"] = ch.dim_out();
    json arms = json::array();
    for (const auto& k : ch.arms()) arms.push_back(matrix_to_json(k));
    j["kraus"] = std::move(arms);
    return j;
}

inline KrausChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kraus"))
        throw Error(Errc::bad_file, "channel: missing 'kraus'");
    if (!j["kraus"].is_array() || j["kraus"].empty())
        throw Error(Errc::bad_file, "channel: 'kraus' must be a nonempty array");
    std::vector<ComplexMatrix> arms;
    for (const json& a : j["kraus"]) arms.push_back(matrix_from_json(a, "channel"));
    const std::string label = j.value("label", std::string("channel"));
    KrausChannel ch(std::move(arms), label);
    if (j.contains("dim_in") && j["dim_in"].get<std::size_t>() != ch.dim_in())
        throw Error(Errc::bad_file, "channel: 'dim_in' disagrees with arms");
    if (j.contains("dim_out") && j["dim_out"].get<std::size_t>() != ch.dim_out())
        throw Error(Errc::bad_file, "channel: 'dim_out' disagrees with arms");
    return ch;
}

inline std::vector<ComplexMatrix> unitaries_from_json(const json& j) {
    if (!j.is_object() || !j.contains("unitaries") || !j["unitaries"].is_array() ||
        j["unitaries"].empty())
        throw Error(Errc::bad_file, "twirl: missing nonempty 'unitaries'");
    std::vector<ComplexMatrix> us;
    for (const json& u : j["unitaries"]) us.push_back(matrix_from_json(u, "twirl"));
    return us;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::bad_file, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::bad_file, "parse error in '" + path + "': " + e.what());
    }
    return j;
}

inline DensityMatrix load_state(const std::string& path) {
    return state_from_json(load_json_file(path));
}

inline KrausChannel load_channel(const std::string& path) {
    return channel_from_json(load_json_file(path));
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::bad_file, "cannot write '" + path + "'");
    out << text;
}

// ---- report serialization ------------------------------------------------

inline json config_to_json(const RunConfig& cfg) {
    return json{{"tol", cfg.tol},
                {"samples", cfg.samples},
                {"remixes", cfg.remixes},
                {"seed", cfg.seed},
                {"version", kVersion}};
}

inline json condition_result_to_json(const ConditionResult& r) {
    json j;
    j["verdict"] = verdict_name(r.verdict);
    j["exact"] = r.exact;
    j["max_residual"] = r.max_residual;
    j["tol"] = r.tol;
    j["samples_used"] = r.samples_used;
    if (r.witness) {
        j["witness"] = state_to_json(*r.witness);
        j["witness_residual"] = r.witness_residual;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json selective_result_to_json(const SelectiveResult& r) {
    json j;
    j["verdict"] = verdict_name(r.verdict);
    j["given_passes"] = r.given_passes;
    j["given_max_residual"] = r.given_max_residual;
    if (r.worst_arm) j["worst_arm"] = *r.worst_arm;
    j["remixes_tried"] = r.remixes_tried;
    if (r.witness_remix >= 0) j["witness_remix"] = r.witness_remix;
    j["best_remix_residual"] = r.best_remix_residual;
    j["tol"] = r.tol;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json classification_to_json(const ClassificationReport& rep) {
    json j;
    j["channel"] = rep.channel;
    j["destroyer"] = rep.destroyer;
    json conds;
    for (const auto& [name, r] : rep.conditions) conds[name] = condition_result_to_json(r);
    for (const auto& [name, r] : rep.selective) conds[name] = selective_result_to_json(r);
    j["conditions"] = std::move(conds);
    if (rep.dims) j["dims"] = {rep.dims->a, rep.dims->b};
    j["seed"] = rep.cfg.seed;
    j["tol"] = rep.cfg.tol;
    j["config"] = config_to_json(rep.cfg);
    j["consistent"] = rep.consistent();
    return j;
}

inline json suite_to_json(const SuiteReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"id", r.id},
                        {"what", r.what},
                        {"expected", r.expected},
                        {"observed", r.observed},
                        {"residual", r.residual},
                        {"pass", r.pass}});
    json j;
    j["rows"] = std::move(rows);
    j["all_pass"] = rep.all_pass;
    j["seconds"] = rep.seconds;
    j["config"] = config_to_json(rep.cfg);
    return j;
}

inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream out;
    out << "epsilon,value_bits,jump_flag\n";
    for (const auto& r : rows) {
        out << std::setprecision(10) << r.epsilon << ','
            << std::fixed << std::setprecision(12) << r.value_bits << ','
            << (r.jump ? 1 : 0) << '\n';
        out.unsetf(std::ios_base::floatfield);
    }
    return out.str();
}

}  // namespace rdmap
