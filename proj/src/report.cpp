#include "cgap/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace cgap {

bool VerificationReport::pass() const {
    return std::all_of(cases.begin(), cases.end(),
                       [](const CaseResult& c) { return c.pass; });
}

void VerificationReport::add_case(std::string name, std::string inputs,
                                  std::string computed, std::string expected) {
    const bool ok = computed == expected;
    cases.push_back({std::move(name), std::move(inputs), std::move(computed),
                     std::move(expected), ok});
}

void VerificationReport::add_case(std::string name, std::string inputs, bool ok) {
    cases.push_back({std::move(name), std::move(inputs), ok ? "true" : "false",
                     "true", ok});
}

void VerificationReport::add_param(std::string key, std::string value) {
    parameters.emplace_back(std::move(key), std::move(value));
}

void VerificationReport::add_witness(std::string key, std::string value) {
    witnesses.emplace_back(std::move(key), std::move(value));
}

namespace {

nlohmann::json report_json(const VerificationReport& r) {
    nlohmann::json j;
    j["claim"] = r.claim;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.parameters)
        params[k] = v;
    j["parameters"] = std::move(params);
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["inputs"] = c.inputs;
        cj["computed"] = c.computed;
        cj["expected"] = c.expected;
        cj["pass"] = c.pass;
        cases.push_back(std::move(cj));
    }
    j["cases"] = std::move(cases);
    nlohmann::json wits = nlohmann::json::object();
    for (const auto& [k, v] : r.witnesses)
        wits[k] = v;
    j["witnesses"] = std::move(wits);
    j["pass"] = r.pass();
    j["tool_version"] = kToolVersion;
    return j;
}

std::string report_text(const VerificationReport& r) {
    std::ostringstream os;
    os << "== " << r.claim << " ==\n";
    os << "parameters:";
    for (const auto& [k, v] : r.parameters)
        os << " " << k << "=" << v;
    os << "\n";
    for (const auto& c : r.cases) {
        os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
        if (!c.inputs.empty())
            os << "  (" << c.inputs << ")";
        os << "\n";
        if (!c.pass || c.computed != "true")
            os << "         computed: " << c.computed << "\n"
               << "         expected: " << c.expected << "\n";
    }
    for (const auto& [k, v] : r.witnesses)
        os << "  witness " << k << ": " << v << "\n";
    os << "result: " << (r.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace

std::string serialize_report(const VerificationReport& r, ReportFormat fmt) {
    if (fmt == ReportFormat::Text)
        return report_text(r);
    return report_json(r).dump(2) + "\n";
}

std::string serialize_reports(const std::vector<VerificationReport>& rs, ReportFormat fmt) {
    if (fmt == ReportFormat::Text) {
        std::string out;
        bool all = true;
        for (const auto& r : rs) {
            out += report_text(r);
            out += "\n";
            all = all && r.pass();
        }
        out += std::string("sweep result: ") + (all ? "PASS" : "FAIL") + "\n";
        return out;
    }
    nlohmann::json j;
    j["claim"] = "sweep";
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rs) {
        arr.push_back(report_json(r));
        all = all && r.pass();
    }
    j["reports"] = std::move(arr);
    j["pass"] = all;
    j["tool_version"] = kToolVersion;
    return j.dump(2) + "\n";
}

} // namespace cgap
