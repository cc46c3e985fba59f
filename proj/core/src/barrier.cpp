#include "barrier.hpp"

#include <algorithm>
#include <cmath>

namespace capkit::barrier {

Vec spd_solve(Mat& h, const Vec& b) {
    Eigen::LLT<Mat> llt(h);
    if (llt.info() == Eigen::Success) {
        Vec x = llt.solve(b);
        if (x.allFinite())
            return x;
    }
    const double scale = std::max(1e-300, h.diagonal().cwiseAbs().maxCoeff());
    for (double jitter = 1e-14; jitter < 1; jitter *= 100) {
        Mat hj = h;
        hj.diagonal().array() += jitter * scale;
        Eigen::LLT<Mat> l2(hj);
        if (l2.info() == Eigen::Success) {
            Vec x = l2.solve(b);
            if (x.allFinite())
                return x;
        }
    }
    return Eigen::LDLT<Mat>(h).solve(b);
}

Result solve(Problem& prob, Vec z0, const Options& opt, double t0) {
    Result res;
    Vec z = std::move(z0);
    const double m = prob.barrier_terms();
    double t = t0 > 0 ? t0 : m / std::max(std::abs(prob.objective(z)), 1e-300);
    Vec dz;
    int it = 0;
    auto [ub, lb] = std::pair<double, double>{0, 0};
    for (int outer = 0; outer < 200; ++outer) {
        for (int inner = 0; inner < 100 && it < opt.max_newton; ++inner) {
            const double lam2 = prob.newton(z, t, dz);
            ++it;
            if (!std::isfinite(lam2) || lam2 <= 1e-10)
                break;
            const double f0 = prob.value(z, t);
            double step = 1;
            while (step > 1e-14 && !prob.interior(z + step * dz))
                step *= 0.5;
            // Accept while the slope along dz is still negative (no cancellation
            // issues at large t), or on sufficient decrease.
            for (; step > 1e-14; step *= 0.5) {
                const Vec zt = z + step * dz;
                if (prob.gradient(zt, t).dot(dz) <= 0)
                    break;
                if (prob.value(zt, t) <= f0 - 0.25 * step * lam2)
                    break;
            }
            if (step <= 1e-14)
                break;
            z += step * dz;
            if (lam2 < 1e-7 && step == 1)
                break;
            if (lam2 < 1e-6 && step < 1e-3)
                break;  // numerically centered
        }
        std::tie(ub, lb) = prob.bounds(z, t);
        if (ub - lb <= opt.tol * std::max(std::abs(ub), 1e-300)) {
            res.converged = true;
            break;
        }
        if (it >= opt.max_newton || t > 1e30)
            break;
        t *= opt.mu;
    }
    res.z = std::move(z);
    res.upper = ub;
    res.lower = lb;
    res.t = t;
    res.iterations = it;
    return res;
}

}  // namespace capkit::barrier
