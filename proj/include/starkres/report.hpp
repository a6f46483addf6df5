#ifndef STARKRES_REPORT_HPP
#define STARKRES_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace starkres {

struct CriterionVerdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// Per-run record container: everything needed to recompute the verdicts is
// stored in `records`, one entry per h (or per sub-run).
struct ExperimentReport {
    std::string experiment;
    int schema_version = 1;
    nlohmann::json scenario;    // config echo
    nlohmann::json records = nlohmann::json::array();
    nlohmann::json provenance;  // seeds, grid sizes, tool version
    std::vector<CriterionVerdict> verdicts;

    bool all_pass() const;
    void add_verdict(const std::string& name, bool pass, double measured, double tolerance,
                     const std::string& detail = "");
    nlohmann::json to_json() const;
};

struct EmitFormats {
    bool json = true;
    bool csv = false;
    bool svg = false;
};

EmitFormats parse_emit(const std::string& spec);  // "json,csv,svg"

// Writes <out_dir>/<experiment>.<ext> for each requested format and returns
// the written paths.  CSV flattens per-record eigenvalue tables; SVG shows a
// complex-plane scatter and, when counts are present, a count-vs-h line.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir,
                                     const EmitFormats& formats);

}  // namespace starkres

#endif
