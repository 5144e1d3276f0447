// Scenario reports: a list of checks, each with an analytic value, the value
// the run produced, and a tolerance. Serialization uses a fixed field order
// and fixed 15-significant-digit formatting so that identical runs produce
// byte-identical reports.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsim/linalg.hpp"

namespace qsim {

struct Check {
    std::string desc;
    double analytic;
    double empirical;
    double tolerance;
    bool pass;
};

struct ScenarioParams {
    std::uint64_t seed = 42;
    std::size_t trials = 0;  // 0 = scenario default
    double tau = 1.0;
    std::vector<double> times;  // empty = scenario default grid
    cplx alpha{0.6, 0.0};
    cplx beta{0.8, 0.0};
};

class ScenarioReport {
public:
    ScenarioReport(std::string scenario, ScenarioParams params)
        : scenario_(std::move(scenario)), params_(std::move(params)) {}

    /// Adds a check; it passes iff |empirical - analytic| <= tolerance.
    void add(std::string desc, double analytic, double empirical, double tolerance);

    const std::string& scenario() const { return scenario_; }
    const ScenarioParams& params() const { return params_; }
    const std::vector<Check>& checks() const { return checks_; }
    bool pass() const;

    std::string to_json() const;
    std::string to_csv() const;

private:
    std::string scenario_;
    ScenarioParams params_;
    std::vector<Check> checks_;
};

/// %.15g rendering used for every number in reports.
std::string format_number(double v);

/// Statistical tolerance for a frequency estimate: 5·sqrt(p(1-p)/n).
double stat_tolerance(double p, std::size_t n);

}  // namespace qsim
