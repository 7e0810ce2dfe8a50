#include "tailscan/report.hpp"

#include <sstream>

namespace tailscan {

using nlohmann::ordered_json;

ordered_json to_json(const ScanResult& res) {
    ordered_json j;
    j["schema"] = kSchema;
    j["kind"] = "scan";
    j["n"] = res.n;
    j["alpha"] = res.alpha;
    j["n_intervals"] = res.n_intervals;
    j["critical_value"] = res.critical_value;
    j["any_detection"] = res.any_detection;
    j["argmax"] = {{"offset", res.argmax.offset},
                   {"length", res.argmax.length},
                   {"t", res.argmax_t}};
    ordered_json rows = ordered_json::array();
    for (const auto& row : res.intervals) {
        rows.push_back({{"offset", row.iv.offset},
                        {"length", row.iv.length},
                        {"t", row.t},
                        {"critical", row.critical},
                        {"kappa", row.kappa},
                        {"exceeds", row.exceeds}});
    }
    j["intervals"] = std::move(rows);
    return j;
}

std::string to_csv(const ScanResult& res) {
    std::ostringstream out;
    out << "offset,length,t,critical,kappa,exceeds\n";
    out.precision(17);
    for (const auto& row : res.intervals) {
        out << row.iv.offset << ',' << row.iv.length << ',' << row.t << ',' << row.critical
            << ',' << row.kappa << ',' << (row.exceeds ? 1 : 0) << '\n';
    }
    return out.str();
}

ordered_json to_json(const McReport& rep) {
    ordered_json j;
    j["name"] = rep.name;
    j["scenario"] = scenario_name(rep.scenario);
    j["seed"] = rep.seed;
    j["replications"] = rep.replications;
    if (!rep.rows.empty()) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : rep.rows) {
            rows.push_back({{"t", row.t},
                            {"empirical", row.empirical},
                            {"stderr", row.stderr_},
                            {"bound", row.bound},
                            {"exceedances", row.exceed_count},
                            {"pass", row.pass}});
        }
        j["thresholds"] = std::move(rows);
    }
    if (rep.detection_rate >= 0.0) {
        j["detection_rate"] = rep.detection_rate;
        j["rate_stderr"] = rep.rate_stderr;
        j["rate_reference"] = rep.rate_reference;
    }
    j["pass"] = rep.pass;
    return j;
}

ordered_json to_json(const SuiteSummary& summary) {
    ordered_json j;
    j["schema"] = kSchema;
    j["kind"] = "verify";
    j["root_seed"] = summary.root_seed;
    ordered_json checks = ordered_json::array();
    for (const auto& rep : summary.reports) checks.push_back(to_json(rep));
    j["checks"] = std::move(checks);
    j["all_pass"] = summary.all_pass;
    return j;
}

}  // namespace tailscan
