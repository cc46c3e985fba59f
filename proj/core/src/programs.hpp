#pragma once

#include <vector>

#include "barrier.hpp"

namespace capkit::programs {

using barrier::Mat;
using barrier::Vec;

// psi(h) = ||h||_q^p for h > 0 componentwise, finite q >= 1; Hessian is
// alpha * u u^T + diag(dd).
struct NormPower {
    double value = 0;
    Vec grad, u, dd;
    double alpha = 0;
};
NormPower norm_power(const Vec& h, double q, double p, bool second_order);

// Program over measures nu >= 0 on E:
//   minimize sum_y m_y ||G_y nu||_{q'}^{p'}   subject to sum(nu) >= 1.
// G stacks the row blocks of all owners y. The paired primal lives on the
// rows: (A v)_e = sum_r m_{owner(r)} G(r,e) v_r, cost sum_y m_y ||v_y||_q^p.
struct MeasureProgram {
    Mat G;
    std::vector<int> owner;
    std::vector<double> owner_mass;
    double p = 2;
    double q = 2;
};

struct MeasureSolution {
    Vec nu;  // normalized to total mass 1
    Vec v;   // feasible primal on rows, min_e (A v)_e = 1
    double upper = 0;  // primal value
    double lower = 0;  // (nu(E) / ||.||)^p
    int iterations = 0;
    bool converged = false;
};

MeasureSolution solve_measure_program(const MeasureProgram& mp, double tol, int max_newton);

// Exact evaluation of both sides for a given measure; v recovered by Hoelder.
double measure_norm_power(const MeasureProgram& mp, const Vec& nu);  // sum_y m_y ||G_y nu||^{p'}

// Relative capacity program over (phi, g).
struct RelConstraint {
    int x = -1, y = -1;  // point indices in the space
    int k = 0;           // distance bucket
    double dbeta = 1;
    int sign = 0;        // +1: phi(x)-phi(y) <= ..., -1: phi(y)-phi(x) <= ...
};

enum class Role { Outside = 0, Fixed1 = 1, Free = 2, Fixed0 = 3 };

struct RelProgram {
    std::vector<Role> role;  // per space point; Outside = not in the seminorm domain
    std::vector<double> mass;
    double p = 2;
    double q = 2;
    std::vector<RelConstraint> cons;
};

struct RelSolution {
    std::vector<double> phi;                    // per point
    std::vector<std::vector<double>> g;         // per point: per bucket slot (see slots)
    std::vector<std::vector<int>> slots;        // per point: bucket ids of g entries (q = inf: single slot k = INT_MIN)
    double value = 0;
    double lower = 0;
    double t = 0;
    int iterations = 0;
    bool converged = false;
};

// warm: solution of an earlier round (fewer constraints) to restart from.
RelSolution solve_rel_program(const RelProgram& rp, double tol, int max_newton, const RelSolution* warm = nullptr);

}  // namespace capkit::programs
