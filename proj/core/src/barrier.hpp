#pragma once

// Log-barrier Newton engine shared by the capacity programs.

#include <Eigen/Dense>
#include <utility>

namespace capkit::barrier {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Problem {
public:
    virtual ~Problem() = default;
    virtual bool interior(const Vec& z) const = 0;
    // t * objective(z) - sum of log slacks
    virtual double value(const Vec& z, double t) const = 0;
    // Gradient of value(., t) at an interior z.
    virtual Vec gradient(const Vec& z, double t) const = 0;
    // Newton direction of value(., t) at z; returns the squared decrement.
    virtual double newton(const Vec& z, double t, Vec& dz) = 0;
    // Certified (upper, lower) bounds on the optimal value of the target quantity.
    virtual std::pair<double, double> bounds(const Vec& z, double t) = 0;
    virtual double objective(const Vec& z) const = 0;
    virtual double barrier_terms() const = 0;
};

struct Options {
    double tol = 1e-6;
    int max_newton = 100000;
    double mu = 12;
};

struct Result {
    Vec z;
    double upper = 0, lower = 0;
    double t = 0;
    int iterations = 0;
    bool converged = false;
};

Result solve(Problem& prob, Vec z0, const Options& opt, double t0 = -1);

// Solve H x = b for symmetric positive (semi)definite H with a jitter fallback.
Vec spd_solve(Mat& h, const Vec& b);

}  // namespace capkit::barrier
