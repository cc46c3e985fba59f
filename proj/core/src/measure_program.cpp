#include <algorithm>
#include <cmath>
#include <limits>

#include "programs.hpp"

namespace capkit::programs {

namespace {

double conj(double p) {
    if (p == 1)
        return std::numeric_limits<double>::infinity();
    if (std::isinf(p))
        return 1;
    return p / (p - 1);
}

double lq(const Vec& v, double q) {
    if (std::isinf(q))
        return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    double acc = 0;
    for (double t : v)
        acc += std::pow(std::abs(t), q);
    return std::pow(acc, 1 / q);
}

}  // namespace

NormPower norm_power(const Vec& h, double q, double p, bool second_order) {
    NormPower r;
    const Eigen::Index n = h.size();
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        s += q == 1 ? h[i] : std::pow(h[i], q);
    const double a = p / q;
    r.value = std::pow(s, a);
    r.grad.resize(n);
    const double c1 = p * std::pow(s, a - 1);
    if (second_order) {
        r.u.resize(n);
        r.dd.resize(n);
        r.alpha = p * (a - 1) * q * std::pow(s, a - 2);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double hq1 = q == 1 ? 1.0 : std::pow(h[i], q - 1);
        r.grad[i] = c1 * hq1;
        if (second_order) {
            r.u[i] = hq1;
            r.dd[i] = q == 1 ? 0.0 : c1 * (q - 1) * std::pow(h[i], q - 2);
        }
    }
    return r;
}

namespace {

class MeasureBarrier : public barrier::Problem {
public:
    explicit MeasureBarrier(const MeasureProgram& mp) : mp_(mp) {
        ne_ = mp.G.cols();
        ny_ = static_cast<Eigen::Index>(mp.owner_mass.size());
        qd_ = conj(mp.q);
        pd_ = conj(mp.p);
        epi_ = std::isinf(qd_);
        rows_of_.assign(static_cast<std::size_t>(ny_), {});
        for (std::size_t r = 0; r < mp.owner.size(); ++r)
            rows_of_[static_cast<std::size_t>(mp.owner[r])].push_back(static_cast<int>(r));
    }

    Eigen::Index dim() const { return ne_ + (epi_ ? ny_ : 0); }

    Vec start() const {
        Vec z(dim());
        z.head(ne_).setConstant(2.0 / static_cast<double>(ne_));
        if (epi_) {
            Vec h = mp_.G * z.head(ne_);
            for (Eigen::Index y = 0; y < ny_; ++y) {
                double mx = 0;
                for (int r : rows_of_[static_cast<std::size_t>(y)])
                    mx = std::max(mx, h[r]);
                z[ne_ + y] = 1.5 * mx + 1e-12;
            }
        }
        return z;
    }

    bool interior(const Vec& z) const override {
        const auto nu = z.head(ne_);
        if (!(nu.minCoeff() > 0) || !(nu.sum() > 1))
            return false;
        if (epi_) {
            Vec h = mp_.G * nu;
            for (std::size_t r = 0; r < mp_.owner.size(); ++r)
                if (!(z[ne_ + mp_.owner[r]] - h[static_cast<Eigen::Index>(r)] > 0))
                    return false;
        }
        return true;
    }

    double objective(const Vec& z) const override {
        const auto nu = z.head(ne_);
        if (epi_) {
            double acc = 0;
            for (Eigen::Index y = 0; y < ny_; ++y)
                acc += mp_.owner_mass[static_cast<std::size_t>(y)] * std::pow(z[ne_ + y], pd_);
            return acc;
        }
        return smooth_value(mp_.G * nu);
    }

    double value(const Vec& z, double t) const override {
        if (!interior(z))
            return std::numeric_limits<double>::infinity();
        const auto nu = z.head(ne_);
        double v = t * objective(z) - std::log(nu.sum() - 1);
        for (Eigen::Index e = 0; e < ne_; ++e)
            v -= std::log(nu[e]);
        if (epi_) {
            Vec h = mp_.G * nu;
            for (std::size_t r = 0; r < mp_.owner.size(); ++r)
                v -= std::log(z[ne_ + mp_.owner[r]] - h[static_cast<Eigen::Index>(r)]);
        }
        return v;
    }

    Vec gradient(const Vec& z, double t) const override {
        const Vec nu = z.head(ne_);
        const Vec h = mp_.G * nu;
        const double s0 = nu.sum() - 1;
        Vec g(dim());
        if (!epi_) {
            Vec grow(h.size());
            for (Eigen::Index y = 0; y < ny_; ++y) {
                const double m = mp_.owner_mass[static_cast<std::size_t>(y)];
                NormPower np = norm_power(owner_rows(h, y), qd_, pd_, false);
                const auto& rows = rows_of_[static_cast<std::size_t>(y)];
                for (std::size_t i = 0; i < rows.size(); ++i)
                    grow[rows[i]] = m * np.grad[static_cast<Eigen::Index>(i)];
            }
            g = t * (mp_.G.transpose() * grow);
        } else {
            Vec inv_s(h.size());
            for (Eigen::Index r = 0; r < h.size(); ++r)
                inv_s[r] = 1 / (z[ne_ + mp_.owner[static_cast<std::size_t>(r)]] - h[r]);
            g.head(ne_) = mp_.G.transpose() * inv_s;
            for (Eigen::Index y = 0; y < ny_; ++y) {
                const double m = mp_.owner_mass[static_cast<std::size_t>(y)];
                g[ne_ + y] = t * pd_ * m * std::pow(z[ne_ + y], pd_ - 1);
                for (int r : rows_of_[static_cast<std::size_t>(y)])
                    g[ne_ + y] -= inv_s[r];
            }
        }
        for (Eigen::Index e = 0; e < ne_; ++e)
            g[e] -= 1.0 / s0 + 1.0 / nu[e];
        return g;
    }

    double newton(const Vec& z, double t, Vec& dz) override {
        return epi_ ? newton_epi(z, t, dz) : newton_smooth(z, t, dz);
    }

    double barrier_terms() const override {
        return static_cast<double>(ne_ + 1) + (epi_ ? static_cast<double>(mp_.owner.size()) : 0.0);
    }

    std::pair<double, double> bounds(const Vec& z, double t) override {
        Vec nu = z.head(ne_) / z.head(ne_).sum();
        const double np = measure_norm_power(mp_, nu);
        lower_ = std::pow(np, -(mp_.p - 1));  // (1/N)^p with N = np^{1/p'}
        Vec v = primal_rows(z, nu, t);
        Vec av = mp_.G.transpose() * (row_mass().asDiagonal() * v);
        const double mn = av.minCoeff();
        if (!(mn > 0)) {
            upper_ = std::numeric_limits<double>::infinity();
        } else {
            v /= mn;
            upper_ = primal_cost(v);
        }
        nu_ = nu;
        v_ = v;
        return {upper_, lower_};
    }

    Vec nu_, v_;
    double upper_ = 0, lower_ = 0;

private:
    Vec row_mass() const {
        Vec m(static_cast<Eigen::Index>(mp_.owner.size()));
        for (std::size_t r = 0; r < mp_.owner.size(); ++r)
            m[static_cast<Eigen::Index>(r)] = mp_.owner_mass[static_cast<std::size_t>(mp_.owner[r])];
        return m;
    }

    Vec owner_rows(const Vec& h, Eigen::Index y) const {
        const auto& rows = rows_of_[static_cast<std::size_t>(y)];
        Vec out(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = h[rows[i]];
        return out;
    }

    double smooth_value(const Vec& h) const {
        double acc = 0;
        for (Eigen::Index y = 0; y < ny_; ++y)
            acc += mp_.owner_mass[static_cast<std::size_t>(y)] * std::pow(lq(owner_rows(h, y), qd_), pd_);
        return acc;
    }

    double primal_cost(const Vec& v) const {
        double acc = 0;
        for (Eigen::Index y = 0; y < ny_; ++y)
            acc += mp_.owner_mass[static_cast<std::size_t>(y)] * std::pow(lq(owner_rows(v, y), mp_.q), mp_.p);
        return acc;
    }

    // Hoelder-extremal rows for finite q'; multipliers for q' = inf.
    Vec primal_rows(const Vec& z, const Vec& nu, double t) const {
        Vec v(static_cast<Eigen::Index>(mp_.owner.size()));
        if (epi_) {
            Vec h = mp_.G * z.head(ne_);
            for (std::size_t r = 0; r < mp_.owner.size(); ++r) {
                const auto y = static_cast<std::size_t>(mp_.owner[r]);
                v[static_cast<Eigen::Index>(r)] =
                    1.0 / (t * (z[ne_ + mp_.owner[r]] - h[static_cast<Eigen::Index>(r)]) * mp_.owner_mass[y]);
            }
            return v;
        }
        Vec h = mp_.G * nu;
        for (Eigen::Index y = 0; y < ny_; ++y) {
            Vec hy = owner_rows(h, y);
            const double nrm = lq(hy, qd_);
            const auto& rows = rows_of_[static_cast<std::size_t>(y)];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const double hr = hy[static_cast<Eigen::Index>(i)];
                v[rows[i]] = qd_ == 1 ? std::pow(nrm, pd_ - 1)
                                      : std::pow(hr, qd_ - 1) * std::pow(nrm, pd_ - qd_);
            }
        }
        return v;
    }

    double newton_smooth(const Vec& z, double t, Vec& dz) {
        const Vec nu = z.head(ne_);
        const Vec h = mp_.G * nu;
        const auto nr = static_cast<Eigen::Index>(mp_.owner.size());
        Vec wrow(nr), grow(nr);
        Mat U(ne_, ny_);
        Vec ucoef(ny_);
        for (Eigen::Index y = 0; y < ny_; ++y) {
            const double m = mp_.owner_mass[static_cast<std::size_t>(y)];
            NormPower np = norm_power(owner_rows(h, y), qd_, pd_, true);
            const auto& rows = rows_of_[static_cast<std::size_t>(y)];
            Vec uy = Vec::Zero(nr);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                grow[rows[i]] = m * np.grad[ii];
                wrow[rows[i]] = m * np.dd[ii];
                uy[rows[i]] = np.u[ii];
            }
            U.col(y) = mp_.G.transpose() * uy;
            ucoef[y] = m * np.alpha;
        }
        Vec g = t * (mp_.G.transpose() * grow);
        Mat H = t * (mp_.G.transpose() * wrow.asDiagonal() * mp_.G);
        H.noalias() += t * (U * ucoef.asDiagonal() * U.transpose());
        const double s0 = nu.sum() - 1;
        g.array() -= 1.0 / s0;
        H.array() += 1.0 / (s0 * s0);
        for (Eigen::Index e = 0; e < ne_; ++e) {
            g[e] -= 1.0 / nu[e];
            H(e, e) += 1.0 / (nu[e] * nu[e]);
        }
        dz = barrier::spd_solve(H, -g);
        return -g.dot(dz);
    }

    double newton_epi(const Vec& z, double t, Vec& dz) {
        const Vec nu = z.head(ne_);
        const Vec h = mp_.G * nu;
        const auto nr = static_cast<Eigen::Index>(mp_.owner.size());
        Vec inv_s(nr), inv_s2(nr);
        for (Eigen::Index r = 0; r < nr; ++r) {
            const double s = z[ne_ + mp_.owner[static_cast<std::size_t>(r)]] - h[r];
            inv_s[r] = 1 / s;
            inv_s2[r] = 1 / (s * s);
        }
        Vec gnu = mp_.G.transpose() * inv_s;
        Mat Hnn = mp_.G.transpose() * inv_s2.asDiagonal() * mp_.G;
        const double s0 = nu.sum() - 1;
        gnu.array() -= 1.0 / s0;
        Hnn.array() += 1.0 / (s0 * s0);
        for (Eigen::Index e = 0; e < ne_; ++e) {
            gnu[e] -= 1.0 / nu[e];
            Hnn(e, e) += 1.0 / (nu[e] * nu[e]);
        }
        Vec gt(ny_), D(ny_);
        Mat B = Mat::Zero(ne_, ny_);
        for (Eigen::Index y = 0; y < ny_; ++y) {
            const double m = mp_.owner_mass[static_cast<std::size_t>(y)];
            const double tau = z[ne_ + y];
            gt[y] = t * pd_ * m * std::pow(tau, pd_ - 1);
            D[y] = t * pd_ * (pd_ - 1) * m * std::pow(tau, pd_ - 2);
            for (int r : rows_of_[static_cast<std::size_t>(y)]) {
                gt[y] -= inv_s[r];
                D[y] += inv_s2[r];
                B.col(y) -= mp_.G.row(r).transpose() * inv_s2[r];
            }
        }
        Vec dinv = D.cwiseInverse();
        Mat S = Hnn;
        S.noalias() -= B * dinv.asDiagonal() * B.transpose();
        Vec rhs = -gnu + B * dinv.cwiseProduct(gt);
        Vec dnu = barrier::spd_solve(S, rhs);
        Vec dt = (-gt - B.transpose() * dnu).cwiseProduct(dinv);
        dz.resize(dim());
        dz.head(ne_) = dnu;
        dz.tail(ny_) = dt;
        return -(gnu.dot(dnu) + gt.dot(dt));
    }

    const MeasureProgram& mp_;
    Eigen::Index ne_ = 0, ny_ = 0;
    double qd_ = 2, pd_ = 2;
    bool epi_ = false;
    std::vector<std::vector<int>> rows_of_;
};

}  // namespace

double measure_norm_power(const MeasureProgram& mp, const Vec& nu) {
    const double qd = conj(mp.q), pd = conj(mp.p);
    const Vec h = mp.G * nu;
    std::vector<std::vector<double>> per(mp.owner_mass.size());
    for (std::size_t r = 0; r < mp.owner.size(); ++r)
        per[static_cast<std::size_t>(mp.owner[r])].push_back(h[static_cast<Eigen::Index>(r)]);
    double acc = 0;
    for (std::size_t y = 0; y < per.size(); ++y) {
        Vec hy = Eigen::Map<Vec>(per[y].data(), static_cast<Eigen::Index>(per[y].size()));
        acc += mp.owner_mass[y] * std::pow(lq(hy, qd), pd);
    }
    return acc;
}

MeasureSolution solve_measure_program(const MeasureProgram& mp, double tol, int max_newton) {
    MeasureBarrier prob(mp);
    barrier::Options opt;
    opt.tol = tol;
    opt.max_newton = max_newton;
    barrier::Result r = barrier::solve(prob, prob.start(), opt);
    MeasureSolution out;
    prob.bounds(r.z, r.t);
    out.nu = prob.nu_;
    out.v = prob.v_;
    out.upper = prob.upper_;
    out.lower = prob.lower_;
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

}  // namespace capkit::programs
