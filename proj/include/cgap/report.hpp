#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cgap {

inline constexpr const char* kToolVersion = "chern-gap 0.1.0";

struct CaseResult {
    std::string name;
    std::string inputs;
    std::string computed;
    std::string expected;
    bool pass = false;
};

// Outcome of one verification run. Witnesses carry the human-facing evidence
// (gap degree, transfer witness element, ...). All degrees stored in
// parameters/witnesses are cohomological (doubled) degrees.
struct VerificationReport {
    std::string claim;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<CaseResult> cases;
    std::vector<std::pair<std::string, std::string>> witnesses;

    bool pass() const;
    void add_case(std::string name, std::string inputs, std::string computed,
                  std::string expected);
    void add_case(std::string name, std::string inputs, bool ok);
    void add_param(std::string key, std::string value);
    void add_witness(std::string key, std::string value);
};

enum class ReportFormat { Text, Structured };

std::string serialize_report(const VerificationReport& r, ReportFormat fmt);
// Aggregate (sweep) serialization; reports are emitted in the given order,
// which callers keep sorted by parameters for stable output.
std::string serialize_reports(const std::vector<VerificationReport>& rs, ReportFormat fmt);

} // namespace cgap
