#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capkit/capacity.hpp"
#include "capkit/space.hpp"

namespace capkit::verify {

// A space family member. Grids and Cantor spaces can be refined, which is
// what the existential checks use for their stability test.
struct Instance {
    std::string family;  // "grid", "cantor", "two_point", "three_chain", "custom"
    int dim = 1;
    int level = 0;
    double ratio = 1.0 / 3;
    int depth = 0;
    Space custom;
    PointSet custom_set;
    std::string custom_name = "custom";

    std::string label() const;
    bool refinable() const;
    Instance refined() const;
    Space build() const;
    // Set used by set-valued checks when none is given.
    PointSet default_set(const Space& s) const;

    static Instance grid(int dim, int level);
    static Instance cantor(double ratio, int depth);
    static Instance two_point();
    static Instance three_chain();
    static Instance from_space(Space s, PointSet e, std::string name);
};

struct CheckConfig {
    CapacityParams params;  // beta, p, q, Lambda
    std::uint64_t seed = 7;
    int samples = 32;
    // expensive checks draw fewer samples than asked unless this is off
    bool cap_samples = true;
    double slack = 1e-9;   // relative slack for explicit inequalities
    double drift = 0.25;   // allowed change of a measured constant under refinement
    double c1 = 1.0 / 80;  // capacity density radius range, as a fraction of diam(E)
    double gap_tol = 1e-4;
    double tol = -1;       // solver tolerance, <0 for the default
    // Params used by checks whose hypotheses need beta*p below the space's
    // reverse doubling exponent, or beta*p < 1.
    double small_beta = 0.25;
    int cantor_max_depth = 6;
    int decay_max_level = 7;
};

struct Hypothesis {
    std::string name;
    bool holds = true;
    bool approximated = false;
    std::string detail;
};

struct CheckResult {
    std::string check_id;
    std::string instance;
    std::vector<Hypothesis> hypotheses;
    double lhs = 0;
    double rhs = 0;
    double measured_constant = 0;
    std::optional<double> explicit_bound;
    // measured constant one refinement up, when the check has one
    std::optional<double> refined_constant;
    std::string status;  // "pass", "fail", "hypothesis-skipped"
    bool pass = false;
    CapacityParams params;
    double runtime = 0;
    std::string detail;
};

const std::vector<std::string>& check_ids();
bool is_check_id(const std::string& id);

CheckResult run_check(const std::string& check_id, const Instance& inst, const CheckConfig& cfg);

struct SuiteEntry {
    std::string check_id;
    Instance instance;
    // replaces cfg.params for this entry
    std::optional<CapacityParams> params;
};

// The desk suite: fixtures, 1-D grids at levels 4..8 and Cantor spaces up to depth 6.
std::vector<SuiteEntry> default_suite(const CheckConfig& cfg);

struct Report {
    std::uint64_t seed = 0;
    std::vector<CheckResult> results;
    // status "fail" only; skipped checks are not failures
    int failures() const;
};

// Results come back in entry order whatever the job count.
Report run_suite(const std::vector<SuiteEntry>& entries, const CheckConfig& cfg, int jobs = 1);

std::string report_json(const Report& r, bool timings = false);
std::string report_csv(const Report& r);

// Density ratios for one closed set E, one row per (point, radius).
struct DensityRow {
    int point = -1;
    double radius = 0;
    std::optional<double> capacity;  // only when radius < c1 diam(E)
    std::optional<double> riesz;     // only when radius < diam(E)/8
    std::optional<double> content;   // only when radius < diam(E)
};

struct DensityScan {
    double diam_e = 0;
    std::vector<DensityRow> rows;
    // min over rows of each ratio, empty when its radius range is empty
    std::optional<double> min_capacity, min_riesz, min_content;
    bool all_vacuous() const { return !min_capacity && !min_riesz && !min_content; }
};

// Each ratio is computed only for radii inside its own range. Closed balls
// must stay within the exact content solver's size limit. content_d is the
// codimension.
DensityScan density_scan(const Space& s, const PointSet& e, const std::vector<double>& radii,
                         const std::vector<int>& points, const CapacityParams& prm, double content_d,
                         double c1, const SolverOptions& opt = {});

// Slope of log2(y) against x, least squares.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace capkit::verify
