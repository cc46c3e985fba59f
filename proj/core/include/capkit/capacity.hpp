#pragma once

#include <string>
#include <vector>

#include "capkit/operators.hpp"
#include "capkit/space.hpp"

namespace capkit {

struct CapacityParams {
    double beta = 0.5;
    double p = 2;
    double q = 2;
    double Lambda = 41;
    // Seminorm domain is the closed ball of radius Lambda*r instead of the open one.
    bool outer_closed = false;
};

void validate_params(const CapacityParams& prm, bool relative);

struct SolverOptions {
    double tol = -1;  // <0: take the default (CAPKIT_TOL or 1e-6)
    int max_iterations = 100000;
    int extra_head = 0;  // extra explicit head scales before the collapsed tail
};

double default_tolerance();

struct CapacityCertificate {
    std::string kind;  // "tl", "relative", "riesz"
    std::string solver_id;
    double value = 0;
    double dual_value = 0;
    double rel_gap = 0;
    int iterations = 0;
    bool converged = true;
    CapacityParams params;
    PointSet set;

    // tl
    ScaleSequence sequence;
    double tail_coeff = 0;
    // relative
    int center = -1;
    double radius = 0;
    PointFunction phi;
    GradientSequence gradient;
    // riesz
    PointFunction density;
    // tl and riesz: maximizing measure on E, normalized to total mass 1
    PointMeasure dual;
};

double relative_gap(double value, double dual_value);

CapacityCertificate cap_tl_primal(const Space& s, const PointSet& e, const CapacityParams& prm,
                                  const SolverOptions& opt = {});
CapacityCertificate cap_tl_dual(const Space& s, const PointSet& e, const CapacityParams& prm,
                                const SolverOptions& opt = {});
CapacityCertificate cap_relative(const Space& s, const PointSet& e, int center, double r,
                                 const CapacityParams& prm, const SolverOptions& opt = {});
CapacityCertificate cap_riesz(const Space& s, const PointSet& e, double beta, double p,
                              const SolverOptions& opt = {});

// (nu(E) / ||H-check nu||_{L^p'(l^q')})^p for a measure supported on E.
double tl_dual_ratio(const Space& s, const PointMeasure& nu, const CapacityParams& prm, int extra_head = 0);

// Largest constraint violation of the stored primal object, recomputed from
// scratch (<= 0 means feasible). Also checks that value matches the objective.
struct ResidualReport {
    double max_violation = 0;
    double objective = 0;
};
ResidualReport certificate_residual(const Space& s, const CapacityCertificate& c);

}  // namespace capkit
