#include "qsim/report.hpp"

#include <cmath>
#include <cstdio>

namespace qsim {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

double stat_tolerance(double p, std::size_t n) {
    return 5.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

void ScenarioReport::add(std::string desc, double analytic, double empirical,
                         double tolerance) {
    const bool pass = std::abs(empirical - analytic) <= tolerance;
    checks_.push_back(Check{std::move(desc), analytic, empirical, tolerance, pass});
}

bool ScenarioReport::pass() const {
    for (const Check& c : checks_)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string ScenarioReport::to_json() const {
    std::string out = "{\n";
    out += "  \"scenario\": \"" + json_escape(scenario_) + "\",\n";
    out += "  \"params\": {";
    out += "\"seed\": " + std::to_string(params_.seed);
    out += ", \"trials\": " + std::to_string(params_.trials);
    out += ", \"tau\": " + format_number(params_.tau);
    out += ", \"times\": [";
    for (std::size_t i = 0; i < params_.times.size(); ++i) {
        if (i) out += ", ";
        out += format_number(params_.times[i]);
    }
    out += "]";
    out += ", \"alpha\": [" + format_number(params_.alpha.real()) + ", " +
           format_number(params_.alpha.imag()) + "]";
    out += ", \"beta\": [" + format_number(params_.beta.real()) + ", " +
           format_number(params_.beta.imag()) + "]";
    out += "},\n";
    out += "  \"checks\": [\n";
    for (std::size_t i = 0; i < checks_.size(); ++i) {
        const Check& c = checks_[i];
        out += "    {\"desc\": \"" + json_escape(c.desc) + "\", \"analytic\": " +
               format_number(c.analytic) + ", \"empirical\": " + format_number(c.empirical) +
               ", \"tolerance\": " + format_number(c.tolerance) +
               ", \"pass\": " + (c.pass ? "true" : "false") + "}";
        if (i + 1 < checks_.size()) out += ",";
        out += "\n";
    }
    out += "  ],\n";
    out += std::string("  \"pass\": ") + (pass() ? "true" : "false") + "\n";
    out += "}\n";
    return out;
}

std::string ScenarioReport::to_csv() const {
    std::string out = "scenario,desc,analytic,empirical,tolerance,pass\n";
    for (const Check& c : checks_) {
        out += csv_field(scenario_) + "," + csv_field(c.desc) + "," +
               format_number(c.analytic) + "," + format_number(c.empirical) + "," +
               format_number(c.tolerance) + "," + (c.pass ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace qsim
