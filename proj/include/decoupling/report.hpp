#pragma once

// JSON report envelope shared by the CLI commands:
//   { schema_version, command, config, results[], verdicts[] }
// Reports echo the full run configuration and never embed timestamps, so a
// repeated run with the same inputs is byte-identical.

#include <string>

#include <json.hpp>

#include "decoupling/exponents.hpp"
#include "decoupling/fit.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

inline json make_report(const std::string& command, json config) {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = command;
    r["config"] = std::move(config);
    r["results"] = json::array();
    r["verdicts"] = json::array();
    return r;
}

inline void add_verdict(json& report, const std::string& name, bool pass,
                        const std::string& detail = "") {
    json v;
    v["name"] = name;
    v["verdict"] = pass ? "pass" : "fail";
    if (!detail.empty()) v["detail"] = detail;
    report["verdicts"].push_back(std::move(v));
}

inline bool all_verdicts_pass(const json& report) {
    for (const auto& v : report["verdicts"])
        if (v["verdict"] != "pass") return false;
    return true;
}

inline json fit_json(const FitResult& fit) {
    json f;
    f["slope"] = fit.slope;
    f["intercept"] = fit.intercept;
    f["max_residual"] = fit.max_residual;
    if (fit.verdict != Verdict::None) {
        f["verdict"] = verdict_name(fit.verdict);
        f["predicted"] = fit.predicted;
        f["tolerance"] = fit.tolerance;
    }
    return f;
}

inline json breakdown_json(const ExponentBreakdown& b) {
    json j;
    j["sharp"] = b.sharp.str();
    j["region"] = b.region.str();
    j["lower_bounds"] = {{"constant", b.lb_constant.str()},
                         {"expsum", b.lb_expsum.str()},
                         {"hyperplane", b.lb_hyperplane.str()}};
    j["attained_by"] = b.attained_by;
    return j;
}

inline json sharpness_report_json(const SharpnessReport& r) {
    json j;
    j["d"] = r.d;
    j["signs"] = r.signs;
    j["denominator_bound"] = r.denominator_bound;
    j["points_checked"] = r.points_checked;
    j["violation_count"] = r.violation_count;
    j["ok"] = r.ok();
    j["violations"] = json::array();
    for (const auto& v : r.violations)
        j["violations"].push_back({{"rp", v.point.rp.str()},
                                   {"rq", v.point.rq.str()},
                                   {"check", v.check},
                                   {"detail", v.detail}});
    return j;
}

} // namespace decoupling
