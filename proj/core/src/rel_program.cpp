#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <limits>
#include <map>

#include "programs.hpp"

namespace capkit::programs {

namespace {

// a warm solve restarts where the duality gap is about this fraction
constexpr double kWarmGap = 0.05;

double conj(double p) {
    if (p == 1)
        return std::numeric_limits<double>::infinity();
    if (std::isinf(p))
        return 1;
    return p / (p - 1);
}

struct Row {
    int phx = -1, phy = -1;  // variable index or -1
    int gx = -1, gy = -1;
    double sgn = 1, dbeta = 1;
    double rhs = 0;          // slack = dbeta (g_x + g_y) - sgn (phi_x - phi_y) with fixed phi folded in
};

struct PointVars {
    int pt = -1;
    int phi = -1;             // variable index
    std::vector<int> slot_k;  // bucket ids
    std::vector<int> slot_v;  // variable indices
};

class RelBarrier : public barrier::Problem {
public:
    explicit RelBarrier(const RelProgram& rp) : rp_(rp) {
        inf_q_ = std::isinf(rp.q);
        const auto np = rp.role.size();
        std::vector<std::map<int, int>> slots(np);
        std::vector<std::vector<int>> nbr(np);
        for (const auto& c : rp.cons) {
            slots[static_cast<std::size_t>(c.x)][inf_q_ ? INT_MIN : c.k];
            slots[static_cast<std::size_t>(c.y)][inf_q_ ? INT_MIN : c.k];
            nbr[static_cast<std::size_t>(c.x)].push_back(c.y);
            nbr[static_cast<std::size_t>(c.y)].push_back(c.x);
        }
        // participating points
        std::vector<int> pts;
        for (std::size_t i = 0; i < np; ++i) {
            if (rp.role[i] == Role::Outside)
                continue;
            if (rp.role[i] == Role::Free || !slots[i].empty())
                pts.push_back(static_cast<int>(i));
        }
        for (auto& v : nbr) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        // independent set of block points, low degree first
        std::vector<int> byd = pts;
        std::stable_sort(byd.begin(), byd.end(), [&](int a, int b) {
            return nbr[static_cast<std::size_t>(a)].size() < nbr[static_cast<std::size_t>(b)].size();
        });
        std::vector<char> is_block(np, 0), banned(np, 0);
        for (int x : byd) {
            if (banned[static_cast<std::size_t>(x)])
                continue;
            is_block[static_cast<std::size_t>(x)] = 1;
            for (int y : nbr[static_cast<std::size_t>(x)])
                banned[static_cast<std::size_t>(y)] = 1;
        }
        // layout: core points first
        slot_of_.assign(np, {});
        pv_of_.assign(np, -1);
        int next = 0;
        auto place = [&](int x) {
            PointVars pv;
            pv.pt = x;
            if (rp.role[static_cast<std::size_t>(x)] == Role::Free) {
                pv.phi = next++;
                phis_.push_back(pv.phi);
            }
            for (auto& [k, v] : slots[static_cast<std::size_t>(x)]) {
                v = next++;
                pv.slot_k.push_back(k);
                pv.slot_v.push_back(v);
                gvars_.push_back(v);
            }
            slot_of_[static_cast<std::size_t>(x)] = slots[static_cast<std::size_t>(x)];
            pv_of_[static_cast<std::size_t>(x)] = static_cast<int>(pvs_.size());
            pvs_.push_back(pv);
        };
        for (int x : pts)
            if (!is_block[static_cast<std::size_t>(x)])
                place(x);
        ncore_ = next;
        ncore_pts_ = pvs_.size();
        for (int x : pts)
            if (is_block[static_cast<std::size_t>(x)])
                place(x);
        nvar_ = next;

        for (const auto& c : rp.cons) {
            Row r;
            r.sgn = c.sign;
            r.dbeta = c.dbeta;
            const auto& px = pvs_[static_cast<std::size_t>(pv_of_[static_cast<std::size_t>(c.x)])];
            const auto& py = pvs_[static_cast<std::size_t>(pv_of_[static_cast<std::size_t>(c.y)])];
            r.phx = px.phi;
            r.phy = py.phi;
            r.gx = slot_of_[static_cast<std::size_t>(c.x)].at(inf_q_ ? INT_MIN : c.k);
            r.gy = slot_of_[static_cast<std::size_t>(c.y)].at(inf_q_ ? INT_MIN : c.k);
            r.rhs = c.sign * (fixed_value(c.x) - fixed_value(c.y));
            rows_.push_back(r);
        }
        block_of_var_.assign(static_cast<std::size_t>(nvar_), -1);
        for (std::size_t b = ncore_pts_; b < pvs_.size(); ++b) {
            if (pvs_[b].phi >= 0)
                block_of_var_[static_cast<std::size_t>(pvs_[b].phi)] = static_cast<int>(b);
            for (int v : pvs_[b].slot_v)
                block_of_var_[static_cast<std::size_t>(v)] = static_cast<int>(b);
        }
    }

    Vec start() const {
        Vec z = Vec::Zero(nvar_);
        for (int v : phis_)
            z[v] = 0.5;
        for (const auto& r : rows_) {
            z[r.gx] = std::max(z[r.gx], 1.5 / r.dbeta);
            z[r.gy] = std::max(z[r.gy], 1.5 / r.dbeta);
        }
        return z;
    }

    // Previous solution pulled slightly toward start(), then g raised until
    // every row is strictly feasible.
    Vec warm(const RelSolution& w) const {
        const Vec z0 = start();
        Vec z = z0;
        for (const auto& pv : pvs_) {
            const auto x = static_cast<std::size_t>(pv.pt);
            if (x >= w.phi.size())
                continue;
            if (pv.phi >= 0)
                z[pv.phi] = w.phi[x];
            for (std::size_t i = 0; i < pv.slot_v.size(); ++i) {
                const auto& ks = w.slots[x];
                const auto it = std::find(ks.begin(), ks.end(), pv.slot_k[i]);
                z[pv.slot_v[i]] = it == ks.end() ? 0.0 : w.g[x][static_cast<std::size_t>(it - ks.begin())];
            }
        }
        z = 0.999 * z + 0.001 * z0;
        for (const auto& r : rows_) {
            const double s = slack(r, z);
            if (s < 1e-3) {
                const double add = (1e-3 - s) / (2 * r.dbeta);
                z[r.gx] += add;
                z[r.gy] += add;
            }
        }
        return z;
    }

    double slack(const Row& r, const Vec& z) const {
        double s = r.dbeta * (z[r.gx] + z[r.gy]) - r.rhs;
        if (r.phx >= 0)
            s -= r.sgn * z[r.phx];
        if (r.phy >= 0)
            s += r.sgn * z[r.phy];
        return s;
    }

    bool interior(const Vec& z) const override {
        for (int v : phis_)
            if (!(z[v] > 0 && z[v] < 1))
                return false;
        for (int v : gvars_)
            if (!(z[v] > 0))
                return false;
        for (const auto& r : rows_)
            if (!(slack(r, z) > 0))
                return false;
        return true;
    }

    Vec gvec(const PointVars& pv, const Vec& z) const {
        Vec h(static_cast<Eigen::Index>(pv.slot_v.size()));
        for (std::size_t i = 0; i < pv.slot_v.size(); ++i)
            h[static_cast<Eigen::Index>(i)] = z[pv.slot_v[i]];
        return h;
    }

    double psi(const PointVars& pv, const Vec& z) const {
        if (pv.slot_v.empty())
            return 0;
        if (inf_q_)
            return std::pow(z[pv.slot_v[0]], rp_.p);
        return norm_power(gvec(pv, z), rp_.q, rp_.p, false).value;
    }

    double objective(const Vec& z) const override {
        double acc = 0;
        for (const auto& pv : pvs_)
            acc += rp_.mass[static_cast<std::size_t>(pv.pt)] * psi(pv, z);
        return acc;
    }

    double value(const Vec& z, double t) const override {
        if (!interior(z))
            return std::numeric_limits<double>::infinity();
        double v = t * objective(z);
        for (int i : phis_)
            v -= std::log(z[i]) + std::log1p(-z[i]);
        for (int i : gvars_)
            v -= std::log(z[i]);
        for (const auto& r : rows_)
            v -= std::log(slack(r, z));
        return v;
    }

    double barrier_terms() const override {
        return static_cast<double>(rows_.size() + gvars_.size() + 2 * phis_.size());
    }

    std::pair<double, double> bounds(const Vec& z, double t) override {
        const double ub = objective(z);
        Vec a = Vec::Zero(nvar_);  // sum of lambda_j times the slack gradient
        double lb = 0;
        for (const auto& r : rows_) {
            const double lam = 1 / (t * slack(r, z));
            lb += lam * r.rhs;
            a[r.gx] += lam * r.dbeta;
            a[r.gy] += lam * r.dbeta;
            if (r.phx >= 0)
                a[r.phx] -= lam * r.sgn;
            if (r.phy >= 0)
                a[r.phy] += lam * r.sgn;
        }
        // min over phi in [0,1] of -a phi
        for (int v : phis_)
            lb += std::min(0.0, -a[v]);
        const double p = rp_.p, qd = conj(rp_.q), pd = conj(p);
        for (const auto& pv : pvs_) {
            if (pv.slot_v.empty())
                continue;
            std::vector<double> av;
            for (int v : pv.slot_v)
                av.push_back(a[v]);
            double nrm = 0;
            if (std::isinf(qd)) {
                for (double x : av)
                    nrm = std::max(nrm, x);
            } else {
                for (double x : av)
                    nrm += std::pow(x, qd);
                nrm = std::pow(nrm, 1 / qd);
            }
            const double m = rp_.mass[static_cast<std::size_t>(pv.pt)];
            lb -= (1 - 1 / p) * std::pow(nrm, pd) * std::pow(m * p, -1 / (p - 1));
        }
        last_lb_ = lb;
        return {ub, lb};
    }

    Vec gradient(const Vec& z, double t) const override {
        Vec g = Vec::Zero(nvar_);
        for (const auto& pv : pvs_) {
            if (pv.slot_v.empty())
                continue;
            const double m = rp_.mass[static_cast<std::size_t>(pv.pt)] * t;
            if (inf_q_) {
                const int v = pv.slot_v[0];
                g[v] += m * rp_.p * std::pow(z[v], rp_.p - 1);
                continue;
            }
            NormPower np = norm_power(gvec(pv, z), rp_.q, rp_.p, false);
            for (std::size_t i = 0; i < pv.slot_v.size(); ++i)
                g[pv.slot_v[i]] += m * np.grad[static_cast<Eigen::Index>(i)];
        }
        for (int v : phis_)
            g[v] += -1 / z[v] + 1 / (1 - z[v]);
        for (int v : gvars_)
            g[v] -= 1 / z[v];
        for (const auto& r : rows_) {
            const double is = 1 / slack(r, z);
            g[r.gx] -= r.dbeta * is;
            g[r.gy] -= r.dbeta * is;
            if (r.phx >= 0)
                g[r.phx] += r.sgn * is;
            if (r.phy >= 0)
                g[r.phy] -= r.sgn * is;
        }
        return g;
    }

    double newton(const Vec& z, double t, Vec& dz) override {
        Vec g = Vec::Zero(nvar_);
        Mat hcc = Mat::Zero(ncore_, ncore_);
        const std::size_t nblk = pvs_.size() - ncore_pts_;
        std::vector<Mat> hbb(nblk);
        std::vector<std::map<int, int>> bcols(nblk);          // core var -> local column
        std::vector<std::vector<std::array<double, 3>>> btrip(nblk);  // (block-local row, core var, value)
        auto boff = [&](std::size_t b) { return first_var(pvs_[ncore_pts_ + b]); };
        for (std::size_t b = 0; b < nblk; ++b) {
            const auto& pv = pvs_[ncore_pts_ + b];
            const auto nb = static_cast<Eigen::Index>(pv.slot_v.size() + (pv.phi >= 0 ? 1 : 0));
            hbb[b] = Mat::Zero(nb, nb);
        }
        auto add_h = [&](int i, int j, double v) {
            const bool ci = i < ncore_, cj = j < ncore_;
            if (ci && cj) {
                hcc(i, j) += v;
            } else if (!ci && !cj) {
                const auto b = static_cast<std::size_t>(block_of_var_[static_cast<std::size_t>(i)]) - ncore_pts_;
                const int o = boff(b);
                hbb[b](i - o, j - o) += v;
            } else if (!ci) {
                const auto b = static_cast<std::size_t>(block_of_var_[static_cast<std::size_t>(i)]) - ncore_pts_;
                btrip[b].push_back({static_cast<double>(i - boff(b)), static_cast<double>(j), v});
            }
            // core-row, block-col entries are the transpose of the case above
        };
        // objective
        for (const auto& pv : pvs_) {
            if (pv.slot_v.empty())
                continue;
            const double m = rp_.mass[static_cast<std::size_t>(pv.pt)] * t;
            if (inf_q_) {
                const int v = pv.slot_v[0];
                g[v] += m * rp_.p * std::pow(z[v], rp_.p - 1);
                add_h(v, v, m * rp_.p * (rp_.p - 1) * std::pow(z[v], rp_.p - 2));
                continue;
            }
            NormPower np = norm_power(gvec(pv, z), rp_.q, rp_.p, true);
            const auto ns = pv.slot_v.size();
            for (std::size_t i = 0; i < ns; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                g[pv.slot_v[i]] += m * np.grad[ii];
                add_h(pv.slot_v[i], pv.slot_v[i], m * np.dd[ii]);
                for (std::size_t j = 0; j < ns; ++j)
                    add_h(pv.slot_v[i], pv.slot_v[j], m * np.alpha * np.u[ii] * np.u[static_cast<Eigen::Index>(j)]);
            }
        }
        for (int v : phis_) {
            const double a = z[v], b = 1 - z[v];
            g[v] += -1 / a + 1 / b;
            add_h(v, v, 1 / (a * a) + 1 / (b * b));
        }
        for (int v : gvars_) {
            g[v] -= 1 / z[v];
            add_h(v, v, 1 / (z[v] * z[v]));
        }
        for (const auto& r : rows_) {
            const double s = slack(r, z);
            int idx[4];
            double w[4];
            int n = 0;
            idx[n] = r.gx, w[n++] = r.dbeta;
            idx[n] = r.gy, w[n++] = r.dbeta;
            if (r.phx >= 0)
                idx[n] = r.phx, w[n++] = -r.sgn;
            if (r.phy >= 0)
                idx[n] = r.phy, w[n++] = r.sgn;
            const double is2 = 1 / (s * s);
            for (int i = 0; i < n; ++i) {
                g[idx[i]] -= w[i] / s;
                for (int j = 0; j < n; ++j)
                    add_h(idx[i], idx[j], w[i] * w[j] * is2);
            }
        }
        // Schur complement onto the core
        Vec rc = -g.head(ncore_);
        std::vector<Eigen::LLT<Mat>> chol(nblk);
        std::vector<Mat> bmat(nblk);
        std::vector<std::vector<int>> bcore(nblk);
        for (std::size_t b = 0; b < nblk; ++b) {
            auto& cols = bcols[b];
            for (const auto& tr : btrip[b])
                cols.emplace(static_cast<int>(tr[1]), 0);
            int c = 0;
            for (auto& [var, loc] : cols) {
                loc = c++;
                bcore[b].push_back(var);
            }
            bmat[b] = Mat::Zero(hbb[b].rows(), c);
            for (const auto& tr : btrip[b])
                bmat[b](static_cast<Eigen::Index>(tr[0]), cols[static_cast<int>(tr[1])]) += tr[2];
            chol[b].compute(hbb[b]);
            const int o = boff(b);
            Vec gb = g.segment(o, hbb[b].rows());
            if (c == 0)
                continue;
            Mat w = chol[b].matrixL().solve(bmat[b]);
            Mat upd = w.transpose() * w;
            Vec yb = chol[b].solve(gb);
            Vec ru = bmat[b].transpose() * yb;
            for (int i = 0; i < c; ++i) {
                rc[bcore[b][static_cast<std::size_t>(i)]] += ru[i];
                for (int j = 0; j < c; ++j)
                    hcc(bcore[b][static_cast<std::size_t>(i)], bcore[b][static_cast<std::size_t>(j)]) -= upd(i, j);
            }
        }
        dz.resize(nvar_);
        if (ncore_ > 0)
            dz.head(ncore_) = barrier::spd_solve(hcc, rc);
        for (std::size_t b = 0; b < nblk; ++b) {
            const int o = boff(b);
            Vec rb = -g.segment(o, hbb[b].rows());
            for (std::size_t i = 0; i < bcore[b].size(); ++i)
                rb -= bmat[b].col(static_cast<Eigen::Index>(i)) * dz[bcore[b][i]];
            dz.segment(o, hbb[b].rows()) = chol[b].solve(rb);
        }
        return -g.dot(dz);
    }

    RelSolution extract(const barrier::Result& res) const {
        RelSolution out;
        const auto np = rp_.role.size();
        out.phi.assign(np, 0.0);
        out.g.assign(np, {});
        out.slots.assign(np, {});
        for (std::size_t i = 0; i < np; ++i)
            out.phi[i] = fixed_value(static_cast<int>(i));
        for (const auto& pv : pvs_) {
            const auto x = static_cast<std::size_t>(pv.pt);
            if (pv.phi >= 0)
                out.phi[x] = res.z[pv.phi];
            out.slots[x] = pv.slot_k;
            for (int v : pv.slot_v)
                out.g[x].push_back(res.z[v]);
        }
        out.value = res.upper;
        out.lower = res.lower;
        out.t = res.t;
        out.iterations = res.iterations;
        out.converged = res.converged;
        return out;
    }

private:
    double fixed_value(int x) const { return rp_.role[static_cast<std::size_t>(x)] == Role::Fixed1 ? 1.0 : 0.0; }

    static int first_var(const PointVars& pv) { return pv.phi >= 0 ? pv.phi : pv.slot_v.front(); }

    const RelProgram& rp_;
    bool inf_q_ = false;
    std::vector<PointVars> pvs_;
    std::vector<int> pv_of_;
    std::vector<std::map<int, int>> slot_of_;
    std::vector<int> phis_, gvars_, block_of_var_;
    std::vector<Row> rows_;
    int ncore_ = 0, nvar_ = 0;
    std::size_t ncore_pts_ = 0;
    double last_lb_ = 0;
};

}  // namespace

RelSolution solve_rel_program(const RelProgram& rp, double tol, int max_newton, const RelSolution* warm) {
    RelBarrier prob(rp);
    barrier::Options opt;
    opt.tol = tol;
    opt.max_newton = max_newton;
    if (warm && warm->t > 0) {
        barrier::Options wopt = opt;
        wopt.max_newton = std::min(max_newton, 300);
        const Vec z0 = prob.warm(*warm);
        const double t0 = std::min(warm->t, prob.barrier_terms() / (kWarmGap * std::max(prob.objective(z0), 1e-300)));
        barrier::Result r = barrier::solve(prob, z0, wopt, t0);
        if (r.converged)
            return prob.extract(r);
        // off the central path by too much; start cold
    }
    barrier::Result r = barrier::solve(prob, prob.start(), opt);
    return prob.extract(r);
}

}  // namespace capkit::programs
