#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mgflab/convergence.hpp"
#include "mgflab/format.hpp"
#include "mgflab/mgf.hpp"

namespace mgflab {

// CSV schemas.  Non-finite cells are left empty; every numeric cell is
// written in shortest round-trip form so parsing and re-emitting a file
// reproduces it exactly.

inline std::string mgf_table_csv(const std::string& family_id,
                                 const std::vector<MgfCell>& table) {
    std::string out = "family,n,t,status,value,error_estimate\n";
    for (const auto& c : table) {
        out += family_id + ',' + format_int(c.n) + ',' + format_double(c.t) + ',' +
               status_name(c.value.status) + ',';
        if (c.value.status == EvalStatus::Finite)
            out += format_double(c.value.value) + ',' + format_double(c.value.error_estimate);
        else
            out += ",";
        out += '\n';
    }
    return out;
}

inline std::string distance_table_csv(const std::vector<DistanceRow>& rows) {
    std::string out = "n,sup_distance,arg_x\n";
    for (const auto& r : rows)
        out += format_int(r.n) + ',' + format_double(r.sup_distance) + ',' +
               format_double(r.arg_x) + '\n';
    return out;
}

inline std::string scan_csv(const std::string& model_label, const std::vector<ScanEntry>& scan) {
    std::string out = "model,t,status\n";
    for (const auto& e : scan)
        out += model_label + ',' + format_double(e.t) + ',' + status_name(e.status) + '\n';
    return out;
}

inline std::string single_mgf_csv(const std::string& model_label, double t, const MgfValue& v) {
    std::string out = "model,t,status,value,error_estimate\n";
    out += model_label + ',' + format_double(t) + ',' + status_name(v.status) + ',';
    if (v.status == EvalStatus::Finite)
        out += format_double(v.value) + ',' + format_double(v.error_estimate);
    else
        out += ",";
    out += '\n';
    return out;
}

inline std::string theorem2_csv(const std::vector<Theorem2Row>& rows) {
    std::string out = "n,sup_g_distance,arg_x,tail_mgf,reference_mgf,abs_diff\n";
    for (const auto& r : rows) {
        out += format_int(r.n) + ',' + format_double(r.sup_g_distance) + ',' +
               format_double(r.arg_x) + ',';
        out += (r.tail_mgf.status == EvalStatus::Finite ? format_double(r.tail_mgf.value) : "");
        out += ',';
        out += (r.reference_mgf.status == EvalStatus::Finite
                    ? format_double(r.reference_mgf.value)
                    : "");
        out += ',';
        out += std::isnan(r.abs_diff) ? "" : format_double(r.abs_diff);
        out += '\n';
    }
    return out;
}

// JSON report, mirroring the ConvergenceReport field names.

inline nlohmann::ordered_json mgf_value_json(const MgfValue& v) {
    nlohmann::ordered_json j;
    j["status"] = status_name(v.status);
    if (v.status == EvalStatus::Finite) {
        j["value"] = v.value;
        j["error_estimate"] = v.error_estimate;
    }
    j["route"] = route_name(v.route);
    return j;
}

inline nlohmann::ordered_json verdict_json(const ConditionVerdict& v) {
    nlohmann::ordered_json j;
    j["status"] = verdict_name(v.status);
    j["note"] = v.note;
    j["evidence"] = {{"columns", v.evidence.columns}, {"rows", v.evidence.rows}};
    return j;
}

inline nlohmann::ordered_json report_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["family"] = rep.family_id;
    j["interval"] = {{"a", rep.interval.a}, {"b", rep.interval.b}};
    j["t_grid"] = rep.t_grid;
    j["n_set"] = rep.n_set;

    j["mgf_table"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.mgf_table) {
        nlohmann::ordered_json cell = mgf_value_json(c.value);
        nlohmann::ordered_json row;
        row["n"] = c.n;
        row["t"] = c.t;
        row.update(cell);
        j["mgf_table"].push_back(row);
    }

    j["limit_mgf"] = nlohmann::ordered_json::array();
    for (const auto& e : rep.limit_mgf) {
        nlohmann::ordered_json row;
        row["t"] = e.t;
        row.update(mgf_value_json(e.value));
        j["limit_mgf"].push_back(row);
    }

    j["sup_distance_by_n"] = nlohmann::ordered_json::array();
    for (const auto& r : rep.sup_distance_by_n)
        j["sup_distance_by_n"].push_back(
            {{"n", r.n}, {"sup_distance", r.sup_distance}, {"arg_x", r.arg_x}});

    j["condition_a"] = verdict_json(rep.condition_a);
    j["condition_b"] = verdict_json(rep.condition_b);
    j["mgf_convergence"] = verdict_json(rep.mgf_convergence);
    j["consistency"] = consistency_name(rep.consistency);
    j["note"] = rep.note;
    return j;
}

}  // namespace mgflab
