#pragma once

#include <functional>
#include <string>

#include "gb/instance_io.hpp"

namespace gb {

// A verification report: stable verdicts and machine-checkable certificates.
// Exit codes: 0 PASS, 1 FAIL, 2 invalid input, 3 numerical failure. Reports
// are byte-stable for identical inputs; timing is left to the caller's
// diagnostics channel.
struct Report {
    std::string command;
    std::string verdict;  // PASS | FAIL | ERROR
    int exit_code = 0;
    std::string summary;
    json body;

    json to_json() const;
};

Report cmd_cohomology(const json& file, int degree);
Report cmd_bundle_iso(const json& a, const json& b);
Report cmd_xprod(const json& file, int point, const std::string& mode);
Report cmd_verify(const json& file, const std::string& what, double tol, const std::string& dual_sign);

// Uniform error mapping: InvalidInput/schema -> ERROR 2, NumericalFailure ->
// ERROR 3, domain verification failures -> FAIL 1.
Report run_guarded(const std::string& command, const std::function<Report()>& fn);

}  // namespace gb
