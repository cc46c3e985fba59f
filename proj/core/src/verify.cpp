#include "capkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "capkit/content.hpp"
#include "json.hpp"

namespace capkit::verify {

namespace {

using Rng = std::mt19937_64;

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Keyed on the family, not the level: a refined instance replays the same
// draws, which is what makes the stability comparison meaningful.
Rng make_rng(const CheckConfig& cfg, const std::string& id, const Instance& inst) {
    std::uint64_t h = 14695981039346656037ull;
    h = fnv1a(h, std::to_string(cfg.seed));
    h = fnv1a(h, id);
    h = fnv1a(h, inst.family + "/" + std::to_string(inst.dim));
    return Rng(h);
}

double unif(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// Nearest point to a uniform location in the coordinate bounding box, or a
// uniform index when the space has no coordinates.
int locate(const Space& s, Rng& rng) {
    const auto& co = s.coords();
    const int n = static_cast<int>(s.size());
    if (co.empty())
        return std::uniform_int_distribution<int>(0, n - 1)(rng);
    const std::size_t dim = co[0].size();
    std::vector<double> lo(dim, 1e300), hi(dim, -1e300), at(dim);
    for (const auto& c : co)
        for (std::size_t k = 0; k < dim; ++k) {
            lo[k] = std::min(lo[k], c[k]);
            hi[k] = std::max(hi[k], c[k]);
        }
    for (std::size_t k = 0; k < dim; ++k)
        at[k] = unif(rng, 0, 1) * (hi[k] - lo[k]) + lo[k];
    int best = 0;
    double bd = 1e300;
    for (int i = 0; i < n; ++i) {
        double d2 = 0;
        for (std::size_t k = 0; k < dim; ++k)
            d2 += (co[i][k] - at[k]) * (co[i][k] - at[k]);
        if (d2 < bd - 1e-15) {
            bd = d2;
            best = i;
        }
    }
    return best;
}

// nu = mu restricted to a random ball
PointMeasure bump_measure(const Space& s, Rng& rng) {
    const int c = locate(s, rng);
    const double rho = std::pow(2.0, -unif(rng, 1, 5)) * std::max(s.diam(), 1e-300);
    PointMeasure nu(s.size(), 0.0);
    for (int y : ball(s, c, rho, true))
        nu[y] = s.mass(y);
    nu[c] = s.mass(c);
    return nu;
}

// Random weights on a random subset; used by the explicit checks.
PointMeasure scattered_measure(const Space& s, Rng& rng) {
    PointMeasure nu(s.size(), 0.0);
    const double keep = unif(rng, 0.1, 1.0);
    for (std::size_t y = 0; y < s.size(); ++y) {
        const double a = unif(rng, 0, 1), w = unif(rng, 0, 1);
        if (a < keep)
            nu[y] = w * s.mass(static_cast<int>(y));
    }
    nu[static_cast<std::size_t>(locate(s, rng))] += s.mass(0);
    return nu;
}

constexpr int kBumpScales = 24;

// f_n = a_n * 1_{B(c_n, rho_n)}. Draws are made for a fixed number of scales
// so that refinement reuses them.
ScaleSequence bump_sequence(const Space& s, const ScaleWindow& w, Rng& rng) {
    ScaleSequence f(w, s.size());
    for (int j = 0; j < kBumpScales; ++j) {
        const int n = w.n0 + j;
        const double a = unif(rng, 0, 1);
        const int c = locate(s, rng);
        const double rho = std::pow(2.0, -unif(rng, 0, 4)) * s.diam();
        if (n > w.n_max)
            continue;
        for (int y : ball(s, c, rho, true))
            f.at(n, y) = a;
        f.at(n, c) = a;
    }
    return f;
}

ScaleSequence noise_sequence(const Space& s, const ScaleWindow& w, Rng& rng) {
    ScaleSequence f(w, s.size());
    for (double& v : f.head)
        v = unif(rng, 0, 1) < 0.5 ? 0.0 : unif(rng, 0, 1);
    return f;
}

struct Env {
    Space s;
    SpaceStats st;
    ScaleWindow w;
    std::vector<PartitionOfUnity> parts;
};

Env make_env(const Instance& inst) {
    Env e;
    e.s = inst.build();
    e.st = estimate_stats(e.s);
    e.w = scale_window(e.s);
    e.parts = partitions_for_window(e.s, e.w);
    e.st.kappa = 1;
    for (const auto& pu : e.parts) {
        e.st.kappa = std::min(e.st.kappa, pu.kappa);
        e.st.L_pou = std::max(e.st.L_pou, pu.L_pou);
        e.st.N_overlap = std::max(e.st.N_overlap, pu.N_overlap);
    }
    return e;
}

struct Ctx {
    const Instance& inst;
    const Env& env;
    const CheckConfig& cfg;
    CapacityParams prm;
    SolverOptions opt;
    Rng rng;
    int samples;
};

struct Measure {
    double lhs = 0, rhs = 0, c = 0;
    std::vector<Hypothesis> hyps;
    std::string detail;
    bool exact_ok = true;
    std::optional<double> bound;
};

Hypothesis hyp(std::string name, bool holds, std::string detail = {}, bool approx = false) {
    return Hypothesis{std::move(name), holds, approx, std::move(detail)};
}

Hypothesis beta_unit(const CapacityParams& prm) {
    return hyp("0 < beta < 1", prm.beta > 0 && prm.beta < 1, "beta=" + fmt_num(prm.beta));
}
Hypothesis p_range(const CapacityParams& prm) {
    return hyp("1 < p < inf", prm.p > 1 && std::isfinite(prm.p), "p=" + fmt_num(prm.p));
}
Hypothesis q_above_one(const CapacityParams& prm) { return hyp("q > 1", prm.q > 1, "q=" + fmt_num(prm.q)); }
Hypothesis sigma_above(const SpaceStats& st, double rhs, const std::string& what) {
    return hyp("sigma > " + what, st.sigma > rhs,
               "sigma=" + fmt_num(st.sigma) + ", " + what + "=" + fmt_num(rhs));
}
Hypothesis reverse_doubling(const SpaceStats& st) {
    return hyp("reverse doubling factor c_R < 1", st.c_R.has_value(),
               st.c_R ? "c_R=" + fmt_num(*st.c_R) : "no factor below 1 on this instance");
}

// keeps the sample with the largest lhs/rhs
struct Worst {
    double lhs = 0, rhs = 0, c = 0;
    bool any = false;
    void add(double l, double r) {
        double ratio = r > 0 ? l / r : (l > 0 ? kInf : 0.0);
        if (!any || ratio > c) {
            lhs = l;
            rhs = r;
            c = ratio;
            any = true;
        }
    }
    void into(Measure& m) const {
        m.lhs = lhs;
        m.rhs = rhs;
        m.c = c;
    }
};

double avg_over(const Space& s, const PointSet& a, const std::function<double(int)>& f) {
    double num = 0, den = 0;
    for (int x : a) {
        num += s.mass(x) * f(x);
        den += s.mass(x);
    }
    return den > 0 ? num / den : 0.0;
}

double lp_over(const Space& s, const PointSet& a, const PointFunction& f, double p) {
    double acc = 0;
    for (int x : a)
        acc += s.mass(x) * std::pow(std::abs(f[x]), p);
    return std::pow(acc, 1 / p);
}

double measure_of(const PointMeasure& nu, const Space& s, int x, double r) {
    double v = 0;
    for (int y : ball(s, x, r))
        v += nu[y];
    return v;
}

PointSet intersect(const PointSet& a, const PointSet& b) {
    PointSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

double solver_tol(const CheckConfig& cfg, double fallback) { return cfg.tol > 0 ? cfg.tol : fallback; }

// --- explicit-constant checks -------------------------------------------

Measure m_leibniz(Ctx& c) {
    const Space& s = c.env.s;
    const double beta = c.prm.beta;
    Measure m;
    m.hyps = {beta_unit(c.prm)};
    m.bound = 1;
    Worst w;
    const int n = static_cast<int>(s.size());
    for (int t = 0; t < c.samples; ++t) {
        PointFunction u(s.size());
        for (double& v : u)
            v = unif(c.rng, -1, 1);
        const GradientSequence g = pointwise_gradient(s, u, all_points(s), beta);
        const int ctr = locate(s, c.rng);
        const double rad = std::pow(2.0, -unif(c.rng, 0, 3)) * std::max(s.diam(), 1e-300);
        PointFunction eta(s.size());
        for (int x = 0; x < n; ++x)
            eta[x] = std::max(0.0, 1 - s.d(x, ctr) / rad);
        const double lip = lipschitz_constant(s, eta);
        const double sup = *std::max_element(eta.begin(), eta.end());
        const GradientSequence rho = leibniz_gradient(s, u, g, eta, lip, sup, beta);
        PointFunction v(s.size());
        for (int x = 0; x < n; ++x)
            v[x] = eta[x] * u[x];
        if (!is_fractional_gradient(s, v, rho, all_points(s), beta).ok)
            m.exact_ok = false;
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                const double d = s.d(x, y);
                const int k = bucket_of(d);
                const double l = std::abs(v[x] - v[y]);
                if (l == 0)
                    continue;
                w.add(l, std::pow(d, beta) * (rho.at(k, x) + rho.at(k, y)));
            }
    }
    w.into(m);
    m.detail = "worst pair ratio over " + std::to_string(c.samples) + " samples";
    return m;
}

Measure m_disc_vs_H(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {hyp("beta > 0", c.prm.beta > 0)};
    const double kappa = c.env.st.kappa;
    m.bound = std::pow(c.env.st.c_mu, 3) / kappa;
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const ScaleSequence f = noise_sequence(s, c.env.w, c.rng);
        const PointFunction h = potential_H(s, f, c.prm.beta, 0.0);
        const PointFunction l = potential_L(s, f, c.prm.beta, c.env.parts);
        for (std::size_t x = 0; x < s.size(); ++x)
            if (h[x] > 0)
                w.add(h[x], l[x]);
    }
    w.into(m);
    m.detail = "c_mu=" + fmt_num(c.env.st.c_mu) + " kappa=" + fmt_num(kappa);
    return m;
}

Measure m_m_twosided(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {hyp("beta > 0", c.prm.beta > 0)};
    m.bound = c.env.st.c_mu;
    Worst w;
    double lower_excess = 0;
    for (int t = 0; t < c.samples; ++t) {
        const PointMeasure nu = scattered_measure(s, c.rng);
        const PointFunction a = dyadic_frac_max(s, nu, c.prm.beta);
        const PointFunction mb = frac_max(s, nu, c.prm.beta);
        for (std::size_t x = 0; x < s.size(); ++x) {
            lower_excess = std::max(lower_excess, a[x] / std::max(mb[x], 1e-300) - 1);
            if (mb[x] > 0)
                w.add(mb[x], a[x]);
        }
    }
    w.into(m);
    m.exact_ok = lower_excess <= c.cfg.slack;
    m.detail = "dyadic <= M_beta: max relative excess " + fmt_num(std::max(lower_excess, 0.0));
    return m;
}

// sum_{n=n0}^{n_max} 2^{-beta n} nu(B(x,2^-n) \ {x}) / mu(B(x,2^-n))
PointFunction dyadic_riesz_sum(const Space& s, const ScaleWindow& w, const PointMeasure& nu, double beta) {
    PointFunction out(s.size(), 0.0);
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        for (int n = w.n0; n <= w.n_max; ++n) {
            const double r = std::ldexp(1.0, -n);
            out[x] += std::pow(2.0, -beta * n) * (measure_of(nu, s, x, r) - nu[x]) / s.ball_mass(x, r);
        }
    return out;
}

Measure m_riesz_twosided(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {hyp("beta > 0", c.prm.beta > 0)};
    m.bound = c.env.st.c_mu;
    Worst first, second;
    for (int t = 0; t < c.samples; ++t) {
        const PointMeasure nu = scattered_measure(s, c.rng);
        const PointFunction iv = riesz_I(s, nu, c.prm.beta);
        const PointFunction sv = dyadic_riesz_sum(s, c.env.w, nu, c.prm.beta);
        for (std::size_t x = 0; x < s.size(); ++x) {
            if (iv[x] > 0)
                first.add(iv[x], sv[x]);
            if (sv[x] > 0)
                second.add(sv[x], iv[x]);
        }
    }
    first.into(m);
    const bool sig = c.env.st.sigma > c.prm.beta;
    m.detail = "reverse side: max sum/I = " + fmt_num(second.c) + " (measured; sigma=" + fmt_num(c.env.st.sigma) +
               (sig ? " > beta)" : " <= beta, hypothesis fails)");
    return m;
}

Measure m_duality(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {hyp("beta > 0", c.prm.beta > 0), p_range(c.prm)};
    m.bound = 1;
    const PointSet e = c.inst.default_set(s);
    SolverOptions opt = c.opt;
    opt.tol = solver_tol(c.cfg, 1e-7);
    const CapacityCertificate cert = cap_tl_primal(s, e, c.prm, opt);
    const ResidualReport res = certificate_residual(s, cert);
    const double dual = tl_dual_ratio(s, cert.dual, c.prm);
    m.lhs = dual;
    m.rhs = res.objective;
    m.c = m.rhs > 0 ? m.lhs / m.rhs : 0;
    const double gap = relative_gap(res.objective, dual);
    m.exact_ok = res.max_violation <= 1e-9 && gap <= c.cfg.gap_tol;
    m.detail = "primal violation " + fmt_num(res.max_violation) + ", gap " + fmt_num(gap);
    return m;
}

// Riesz primal density scaled to be exactly admissible: I f >= 1 on E.
PointFunction admissible_density(const Space& s, const PointSet& e, const CapacityCertificate& r, double beta) {
    PointFunction f = r.density;
    const PointFunction iv = riesz_I_density(s, f, beta);
    double lo = kInf;
    for (int x : e)
        lo = std::min(lo, iv[x]);
    if (lo > 0 && std::isfinite(lo))
        for (double& v : f)
            v /= lo;
    return f;
}

Measure m_riesz_vs_tl(Ctx& c) {
    const Space& s = c.env.s;
    const double beta = c.prm.beta, p = c.prm.p;
    Measure m;
    m.hyps = {hyp("beta > 0", beta > 0), p_range(c.prm)};
    const double cmu = c.env.st.c_mu;
    m.bound = 1;
    const PointSet e = c.inst.default_set(s);
    SolverOptions opt = c.opt;
    opt.tol = solver_tol(c.cfg, 1e-7);
    CapacityParams pinf = c.prm;
    pinf.q = kInf;
    const CapacityCertificate cinf = cap_tl_primal(s, e, pinf, opt);
    const CapacityCertificate rz = cap_riesz(s, e, beta, p, opt);
    // c_mu^{-2p} Cp_inf <= R, using a lower bound for Cp_inf and an upper one for R
    m.lhs = std::pow(cmu, -2 * p) * cinf.dual_value;
    m.rhs = rz.value;
    m.c = m.rhs > 0 ? m.lhs / m.rhs : 0;

    // the comparison sequence h_n = c_mu^2 f must be admissible for Cp_inf
    const PointFunction f = admissible_density(s, e, rz, beta);
    ScaleSequence h(c.env.w, s.size());
    for (int n = c.env.w.n0; n <= c.env.w.n_max; ++n)
        for (std::size_t x = 0; x < s.size(); ++x)
            h.at(n, static_cast<int>(x)) = cmu * cmu * f[x];
    for (std::size_t x = 0; x < s.size(); ++x)
        h.tail[x] = cmu * cmu * f[x];
    const PointFunction hv = potential_H(s, h, beta, tail_weight(c.env.w, beta, 1.0));
    double hmin = kInf;
    for (int x : e)
        hmin = std::min(hmin, hv[x]);
    const double hn = std::pow(mixed_norm(s, h, all_points(s), p, kInf), p);
    double fn = 0;
    for (std::size_t x = 0; x < s.size(); ++x)
        fn += s.mass(static_cast<int>(x)) * std::pow(f[x], p);
    const double want = std::pow(cmu, 2 * p) * fn;
    m.exact_ok = (e.empty() || hmin >= 1 - 1e-9) && std::abs(hn - want) <= 1e-9 * std::max(1.0, want);

    const bool sig = c.env.st.sigma > beta;
    CapacityParams p2 = c.prm;
    p2.q = 2;
    const CapacityCertificate c2 = cap_tl_primal(s, e, p2, opt);
    m.detail = "min H_beta h on E " + fmt_num(hmin) + "; upper side R/Cp_inf = " +
               fmt_num(cinf.dual_value > 0 ? rz.value / cinf.dual_value : 0) + ", Cp_q2/R = " +
               fmt_num(rz.dual_value > 0 ? c2.value / rz.dual_value : 0) + " (measured; sigma=" +
               fmt_num(c.env.st.sigma) + (sig ? " > beta)" : " <= beta, hypothesis fails)");
    return m;
}

// --- existential checks --------------------------------------------------

Measure m_poincare(Ctx& c) {
    const Space& s = c.env.s;
    const double beta = c.prm.beta;
    Measure m;
    m.hyps = {beta_unit(c.prm), reverse_doubling(c.env.st)};
    int nmin = -64;
    while (!(std::ldexp(1.0, -nmin + 3) < s.diam()) && nmin < 64)
        ++nmin;
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        const int z = locate(s, c.rng);
        const int n = nmin + std::uniform_int_distribution<int>(0, 1)(c.rng);
        PointFunction u(s.size());
        for (std::size_t x = 0; x < s.size(); ++x)
            u[x] = s.d(static_cast<int>(x), z);
        const PointSet omega = ball(s, x0, std::ldexp(1.0, -n + 2));
        const GradientSequence g = pointwise_gradient(s, u, omega, beta);
        const PointSet b = ball(s, x0, std::ldexp(1.0, -n));
        const double ub = avg_over(s, b, [&](int x) { return u[x]; });
        const double l = avg_over(s, b, [&](int x) { return std::abs(u[x] - ub); });
        double r = 0;
        for (int k = n - 3; k <= n; ++k)
            r += avg_over(s, omega, [&](int x) { return g.at(k, x); });
        w.add(l, std::pow(2.0, -n * beta) * r);
    }
    w.into(m);
    m.detail = "u = distance to a random point, g = pointwise gradient on B(x0, 2^{2-n})";
    return m;
}

Measure m_mw(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {p_range(c.prm), sigma_above(c.env.st, c.prm.beta, "beta")};
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const PointMeasure nu = bump_measure(s, c.rng);
        const double num = hdual_norm(s, hdual_sequence(s, nu, c.prm.beta, 1.0), c.prm.p);
        const double den = lp_over(s, all_points(s), frac_max(s, nu, c.prm.beta), c.prm.p);
        w.add(num, den);
    }
    w.into(m);
    m.detail = "bump measures, l^1 over scales";
    return m;
}

Measure m_q_indep(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {p_range(c.prm), sigma_above(c.env.st, c.prm.beta, "beta")};
    SolverOptions opt = c.opt;
    opt.tol = solver_tol(c.cfg, 1e-6);
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int pieces = std::uniform_int_distribution<int>(1, 3)(c.rng);
        PointSet e;
        for (int i = 0; i < pieces; ++i) {
            const int ctr = locate(s, c.rng);
            const double rho = std::pow(2.0, -unif(c.rng, 2, 5)) * s.diam();
            for (int y : ball(s, ctr, rho, true))
                e.push_back(y);
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        double lo = kInf, hi = 0;
        for (double q : {1.0, 1.5, 2.0, kInf}) {
            CapacityParams pq = c.prm;
            pq.q = q;
            const double v = cap_tl_primal(s, e, pq, opt).value;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        w.add(hi, lo);
    }
    w.into(m);
    m.detail = "max/min of Cp over q in {1, 3/2, 2, inf}, unions of random balls";
    return m;
}

GradientSequence convolution_gradient(const Env& env, const ScaleSequence& f, double beta) {
    const Space& s = env.s;
    const ScaleWindow& w = env.w;
    const double cmu = env.st.c_mu, nn = env.st.N_overlap, ll = env.st.L_pou;
    std::vector<PointFunction> mf;
    for (int n = w.n0; n <= w.n_max; ++n) {
        PointFunction fn(s.size());
        for (std::size_t x = 0; x < s.size(); ++x)
            fn[x] = f.at(n, static_cast<int>(x));
        mf.push_back(max_noncentered(s, fn));
    }
    GradientSequence g;
    for (int k = w.n0; k <= w.n_max; ++k) {
        PointFunction gk(s.size(), 0.0);
        for (int n = w.n0; n <= w.n_max; ++n) {
            const auto& mn = mf[static_cast<std::size_t>(n - w.n0)];
            const double coef = n >= k ? nn * cmu * std::pow(2.0, beta) * std::pow(2.0, beta * (k - n))
                                       : ll * nn * cmu * std::pow(2.0, (beta - 1) * (k - n));
            for (std::size_t x = 0; x < s.size(); ++x)
                gk[x] += coef * mn[x];
        }
        g.g[k] = std::move(gk);
    }
    return g;
}

Measure m_pot_norm(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {beta_unit(c.prm), p_range(c.prm), q_above_one(c.prm)};
    Worst w;
    bool valid = true;
    for (int t = 0; t < c.samples; ++t) {
        const ScaleSequence f = bump_sequence(s, c.env.w, c.rng);
        const PointFunction u = potential_L(s, f, c.prm.beta, c.env.parts);
        const GradientSequence g = convolution_gradient(c.env, f, c.prm.beta);
        if (!is_fractional_gradient(s, u, g, all_points(s), c.prm.beta, 1e-9).ok)
            valid = false;
        w.add(mixed_norm(s, g, all_points(s), c.prm.p, c.prm.q), mixed_norm(s, f, all_points(s), c.prm.p, c.prm.q));
    }
    w.into(m);
    m.exact_ok = valid;
    m.detail = std::string("explicit gradient ") + (valid ? "valid" : "INVALID") + "; N=" +
               fmt_num(c.env.st.N_overlap) + " L=" + fmt_num(c.env.st.L_pou);
    return m;
}

Measure m_pot_sobolev(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {p_range(c.prm), q_above_one(c.prm), sigma_above(c.env.st, c.prm.beta * c.prm.p, "beta*p")};
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const ScaleSequence f = bump_sequence(s, c.env.w, c.rng);
        const PointFunction u = potential_L(s, f, c.prm.beta, c.env.parts);
        const int x0 = locate(s, c.rng);
        const double r = std::pow(2.0, -unif(c.rng, 1, 4)) * s.diam();
        w.add(lp_over(s, ball(s, x0, r), u, c.prm.p),
              std::pow(r, c.prm.beta) * mixed_norm(s, f, all_points(s), c.prm.p, c.prm.q));
    }
    w.into(m);
    return m;
}

SolverOptions rel_options(const Ctx& c) {
    SolverOptions opt = c.opt;
    opt.tol = solver_tol(c.cfg, 1e-4);
    return opt;
}

Measure m_equiv_upper(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    m.hyps = {beta_unit(c.prm), p_range(c.prm), q_above_one(c.prm),
              hyp("Lambda >= 2", c.prm.Lambda >= 2, "Lambda=" + fmt_num(c.prm.Lambda)),
              sigma_above(c.env.st, c.prm.beta * c.prm.p, "beta*p")};
    const SolverOptions opt = rel_options(c);
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        const double r = s.diam() / 8;
        const double rho = r * unif(c.rng, 0.25, 1.0);
        const PointSet e = ball(s, x0, rho, true);
        const double cap = cap_relative(s, e, x0, r, c.prm, opt).value;
        const double cp = cap_tl_primal(s, e, c.prm, opt).dual_value;
        w.add(cap, cp);
    }
    w.into(m);
    m.detail = "cap(E, 2B, Lambda B) / Cp(E), E a closed sub-ball of B, r = diam/8";
    return m;
}

double lower_radius(const Space& s) { return s.diam() / 96; }

std::vector<PointSet> ball_and_half(const Space& s, int x0, double r) {
    const PointSet b = ball(s, x0, r, true);
    PointSet half;
    const auto& co = s.coords();
    for (int y : b)
        if (co.empty() ? y <= x0 : co[y][0] <= co[x0][0])
            half.push_back(y);
    return {b, half};
}

std::vector<Hypothesis> lower_hyps(const Ctx& c, double r) {
    return {beta_unit(c.prm), p_range(c.prm),
            hyp("Lambda >= 41", c.prm.Lambda >= 41, "Lambda=" + fmt_num(c.prm.Lambda)),
            hyp("r < diam/80", r < c.env.s.diam() / 80, "r=" + fmt_num(r)), reverse_doubling(c.env.st)};
}

Measure m_equiv_lower(Ctx& c) {
    const Space& s = c.env.s;
    const double r = lower_radius(s);
    Measure m;
    m.hyps = lower_hyps(c, r);
    const SolverOptions opt = rel_options(c);
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        for (const PointSet& e : ball_and_half(s, x0, r)) {
            const double cp = cap_tl_primal(s, e, c.prm, opt).value;
            const double cap = cap_relative(s, e, x0, r, c.prm, opt).dual_value;
            w.add(cp, cap);
        }
    }
    w.into(m);
    m.detail = "Cp(E) / cap(E, 2B, Lambda B), E = closed ball and its left half, r = diam/96";
    return m;
}

Measure m_hc_lower(Ctx& c) {
    const Space& s = c.env.s;
    const double r = lower_radius(s);
    Measure m;
    m.hyps = lower_hyps(c, r);
    CapacityParams pinf = c.prm;
    pinf.q = kInf;
    const SolverOptions opt = rel_options(c);
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        for (const PointSet& e : ball_and_half(s, x0, r)) {
            const double cap = cap_relative(s, e, x0, r, pinf, opt).dual_value;
            for (double eta : {0.0, c.prm.p / 2}) {
                ContentParams cp;
                cp.d = c.prm.beta * eta;
                cp.rho = 5 * c.prm.Lambda * r;
                const double h = content_exact(s, e, cp).total;
                w.add(h, std::pow(r, c.prm.beta * (c.prm.p - eta)) * cap);
            }
        }
    }
    w.into(m);
    m.detail = "eta in {0, p/2}, capacity with q = inf, r = diam/96";
    return m;
}

Measure m_ball_upper(Ctx& c) {
    const Space& s = c.env.s;
    CapacityParams p1 = c.prm;
    p1.q = 1;
    Measure m;
    m.hyps = {beta_unit(p1), p_range(p1), hyp("Lambda >= 2", p1.Lambda >= 2, "Lambda=" + fmt_num(p1.Lambda))};
    const SolverOptions opt = rel_options(c);
    Worst w;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        const double r = std::pow(2.0, -unif(c.rng, 3, 4)) * s.diam();
        const double cap = cap_relative(s, ball(s, x0, r, true), x0, r, p1, opt).value;
        w.add(cap, std::pow(r, -p1.beta * p1.p) * s.ball_mass(x0, r));
    }
    w.into(m);
    m.detail = "q = 1, E = closed ball, r in [diam/16, diam/8]";
    return m;
}

Measure m_ball_lower(Ctx& c) {
    const Space& s = c.env.s;
    CapacityParams pinf = c.prm;
    pinf.q = kInf;
    Measure m;
    m.hyps = {beta_unit(pinf), p_range(pinf), hyp("Lambda > 2", pinf.Lambda > 2, "Lambda=" + fmt_num(pinf.Lambda)),
              hyp("connected", true, "grids stand in for a connected space", true)};
    const SolverOptions opt = rel_options(c);
    Worst w;
    bool radius_ok = true;
    for (int t = 0; t < c.samples; ++t) {
        const int x0 = locate(s, c.rng);
        const double r = std::pow(2.0, -unif(c.rng, 4, 5)) * s.diam();
        radius_ok = radius_ok && r < s.diam() / 8;
        const double cap = cap_relative(s, ball(s, x0, r, true), x0, r, pinf, opt).dual_value;
        w.add(std::pow(r, -pinf.beta * pinf.p) * s.ball_mass(x0, r), cap);
    }
    m.hyps.push_back(hyp("r < diam/8", radius_ok));
    w.into(m);
    m.detail = "q = inf, E = closed ball, r in [diam/32, diam/16]";
    return m;
}

// --- drivers ---------------------------------------------------------------

using MeasureFn = Measure (*)(Ctx&);

struct CheckSpec {
    const char* id;
    MeasureFn fn;
    bool explicit_constant;
    int samples;  // 0: cfg.samples
};

Measure m_ball_example_decay(Ctx&);
Measure m_density_equiv(Ctx&);

const std::vector<CheckSpec>& specs() {
    static const std::vector<CheckSpec> v = {
        {"poincare", m_poincare, false, 0},
        {"leibniz", m_leibniz, true, 0},
        {"ball_upper", m_ball_upper, false, 2},
        {"ball_lower", m_ball_lower, false, 2},
        {"ball_example_decay", m_ball_example_decay, false, 1},
        {"hc_lower", m_hc_lower, false, 1},
        {"pot_norm", m_pot_norm, false, 8},
        {"pot_sobolev", m_pot_sobolev, false, 0},
        {"disc_vs_H", m_disc_vs_H, true, 0},
        {"equiv_upper", m_equiv_upper, false, 2},
        {"equiv_lower", m_equiv_lower, false, 1},
        {"duality", m_duality, true, 1},
        {"mw", m_mw, false, 0},
        {"m_twosided", m_m_twosided, true, 0},
        {"q_indep", m_q_indep, false, 8},
        {"riesz_twosided", m_riesz_twosided, true, 0},
        {"riesz_vs_tl", m_riesz_vs_tl, true, 1},
        {"density_equiv", m_density_equiv, false, 1},
    };
    return v;
}

const CheckSpec* find_spec(const std::string& id) {
    for (const auto& sp : specs())
        if (id == sp.id)
            return &sp;
    return nullptr;
}

bool hyps_hold(const std::vector<Hypothesis>& h) {
    return std::all_of(h.begin(), h.end(), [](const Hypothesis& x) { return x.holds; });
}

Measure run_measure(const CheckSpec& sp, const Instance& inst, const Env& env, const CheckConfig& cfg) {
    SolverOptions opt;
    opt.tol = cfg.tol;
    Ctx c{inst, env, cfg, cfg.params, opt, make_rng(cfg, sp.id, inst), sp.samples > 0 && cfg.cap_samples ? std::min(sp.samples, cfg.samples) : cfg.samples};
    return sp.fn(c);
}

bool stable(double c0, double c1, double drift) {
    if (c0 == 0 && c1 == 0)
        return true;
    if (!(c0 > 0) || !std::isfinite(c0) || !std::isfinite(c1))
        return false;
    return std::abs(c1 / c0 - 1) <= drift;
}

}  // namespace

// --- ball example and density scan -------------------------------------------

namespace {

// Coarse unit ball on a lattice of spacing 2^-j over [0, 2], center at 0.
double ball_example_cap(int j, const CapacityParams& prm, const SolverOptions& opt) {
    const int m = 1 << j;
    const Space line = build_line(2 * m + 1, 1.0 / m, 1.0 / m);
    CapacityParams p = prm;
    p.Lambda = 2;
    p.outer_closed = true;
    p.q = kInf;
    return cap_relative(line, ball(line, 0, 1.0, true), 0, 1.0, p, opt).value;
}

Measure m_ball_example_decay(Ctx& c) {
    Measure m;
    const double bp = c.prm.beta * c.prm.p;
    m.hyps = {beta_unit(c.prm), p_range(c.prm), hyp("beta*p < 1", bp < 1, "beta*p=" + fmt_num(bp))};
    if (!hyps_hold(m.hyps))
        return m;
    const SolverOptions opt = rel_options(c);
    std::vector<double> js, caps;
    std::string d = "Lambda=2, q=inf; cap by level:";
    for (int j = 4; j <= std::max(5, c.cfg.decay_max_level); ++j) {
        js.push_back(j);
        caps.push_back(ball_example_cap(j, c.prm, opt));
        d += " " + std::to_string(j) + ":" + fmt_num(caps.back());
    }
    m.lhs = fit_slope(js, caps);
    m.rhs = -(1 - bp);
    m.c = m.lhs;
    m.exact_ok = std::abs(m.lhs - m.rhs) <= 0.2;
    m.detail = d + "; fitted exponent vs -(1-beta*p), tolerance 0.2";
    return m;
}

double diameter_of(const Space& s, const PointSet& e) {
    double d = 0;
    for (int a : e)
        for (int b : e)
            d = std::max(d, s.d(a, b));
    return d;
}

std::optional<double> min_opt(std::optional<double> a, double v) { return a ? std::min(*a, v) : v; }

Measure m_density_equiv(Ctx& c) {
    const Space& s = c.env.s;
    Measure m;
    const double bp = c.prm.beta * c.prm.p;
    m.hyps = {beta_unit(c.prm), p_range(c.prm), q_above_one(c.prm),
              hyp("complete geodesic space", true, "finite line grid stands in", true),
              sigma_above(c.env.st, bp, "beta*p")};
    const PointSet e = c.inst.default_set(s);
    const double h = s.min_dist();
    std::vector<double> radii;
    for (int j = 0; j <= 2; ++j)
        radii.push_back(h * std::pow(3.0, j) * (1 + 1e-9));
    const double dim = std::log(2.0) / std::log(3.0);
    std::vector<int> pts = {e.front(), e[e.size() / 2], e.back()};
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const SolverOptions opt = rel_options(c);
    const DensityScan scan = density_scan(s, e, radii, pts, c.prm, 1 - dim, c.cfg.c1, opt);
    // single point: every range is empty
    const DensityScan single = density_scan(s, {e.front()}, radii, {e.front()}, c.prm, 1 - dim, c.cfg.c1, opt);
    const bool all_pos = scan.min_capacity && scan.min_riesz && scan.min_content && *scan.min_capacity > 0 &&
                         *scan.min_riesz > 0 && *scan.min_content > 0;
    m.exact_ok = (all_pos || scan.all_vacuous()) && single.all_vacuous();
    m.lhs = scan.min_capacity.value_or(0);
    m.rhs = 1;
    m.c = std::min({scan.min_capacity.value_or(kInf), scan.min_riesz.value_or(kInf), scan.min_content.value_or(kInf)});
    if (!std::isfinite(m.c))
        m.c = 0;
    // self-improvement probe: content density one step closer to beta*p
    const double d2 = (1 - dim + bp) / 2;
    std::optional<double> probe;
    for (int x : pts)
        for (double r : radii) {
            if (!(r < scan.diam_e))
                continue;
            ContentParams cp{d2, r};
            const PointSet b = ball(s, x, r, true);
            const double den = content_exact(s, b, cp).total;
            if (den > 0)
                probe = min_opt(probe, content_exact(s, intersect(e, b), cp).total / den);
        }
    auto show = [](const std::optional<double>& v) { return v ? fmt_num(*v) : std::string("vacuous"); };
    m.detail = "min ratios: capacity " + show(scan.min_capacity) + ", riesz " + show(scan.min_riesz) +
               ", content(d=" + fmt_num(1 - dim) + ") " + show(scan.min_content) + "; single point " +
               (single.all_vacuous() ? "vacuous" : "not vacuous") + "; probe content(d=" + fmt_num(d2) + ") " +
               show(probe);
    return m;
}

}  // namespace

DensityScan density_scan(const Space& s, const PointSet& e0, const std::vector<double>& radii,
                         const std::vector<int>& points, const CapacityParams& prm, double content_d, double c1,
                         const SolverOptions& opt) {
    PointSet e = e0;
    std::sort(e.begin(), e.end());
    DensityScan out;
    out.diam_e = diameter_of(s, e);
    for (int x : points)
        for (double r : radii) {
            DensityRow row;
            row.point = x;
            row.radius = r;
            const PointSet b = ball(s, x, r, true);
            const PointSet eb = intersect(e, b);
            if (r < c1 * out.diam_e) {
                const double den = cap_relative(s, b, x, r, prm, opt).value;
                if (den > 0)
                    row.capacity = cap_relative(s, eb, x, r, prm, opt).value / den;
            }
            if (r < out.diam_e / 8) {
                const double den = cap_riesz(s, b, prm.beta, prm.p, opt).value;
                if (den > 0)
                    row.riesz = cap_riesz(s, eb, prm.beta, prm.p, opt).value / den;
            }
            if (r < out.diam_e) {
                ContentParams cp{content_d, r};
                const double den = content_exact(s, b, cp).total;
                if (den > 0)
                    row.content = content_exact(s, eb, cp).total / den;
            }
            if (row.capacity)
                out.min_capacity = min_opt(out.min_capacity, *row.capacity);
            if (row.riesz)
                out.min_riesz = min_opt(out.min_riesz, *row.riesz);
            if (row.content)
                out.min_content = min_opt(out.min_content, *row.content);
            out.rows.push_back(row);
        }
    return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ly = std::log2(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    const double den = static_cast<double>(n) * sxx - sx * sx;
    return den != 0 ? (static_cast<double>(n) * sxy - sx * sy) / den : 0.0;
}

// --- Instance ------------------------------------------------------------------

std::string Instance::label() const {
    if (family == "grid")
        return "grid-" + std::to_string(dim) + "d-level" + std::to_string(level);
    if (family == "cantor")
        return "cantor-" + fmt_num(ratio) + "-depth" + std::to_string(depth);
    if (family == "custom")
        return custom_name;
    return family;
}

bool Instance::refinable() const { return family == "grid" || family == "cantor"; }

Instance Instance::refined() const {
    Instance r = *this;
    if (family == "grid")
        ++r.level;
    else if (family == "cantor")
        ++r.depth;
    else
        throw Error("instance " + label() + " has no refinement");
    return r;
}

Space Instance::build() const {
    if (family == "grid")
        return build_grid(dim, level);
    if (family == "cantor")
        return build_cantor(ratio, depth).space;
    if (family == "two_point")
        return capkit::two_point_space();
    if (family == "three_chain")
        return capkit::three_chain();
    if (family == "custom")
        return custom;
    throw Error("unknown instance family " + family);
}

PointSet Instance::default_set(const Space& s) const {
    if (family == "two_point" || family == "three_chain")
        return {0};
    if (family == "cantor")
        return build_cantor(ratio, depth).set;
    if (family == "custom")
        return custom_set;
    // grid: closed ball of radius 1/8 around the point nearest the middle
    const auto& co = s.coords();
    int best = 0;
    double bd = 1e300;
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
        double d2 = 0;
        for (double v : co[i])
            d2 += (v - 0.5) * (v - 0.5);
        if (d2 < bd - 1e-15) {
            bd = d2;
            best = i;
        }
    }
    return ball(s, best, 0.125, true);
}

Instance Instance::grid(int dim, int level) {
    Instance i;
    i.family = "grid";
    i.dim = dim;
    i.level = level;
    return i;
}

Instance Instance::cantor(double ratio, int depth) {
    Instance i;
    i.family = "cantor";
    i.ratio = ratio;
    i.depth = depth;
    return i;
}

Instance Instance::two_point() {
    Instance i;
    i.family = "two_point";
    return i;
}

Instance Instance::three_chain() {
    Instance i;
    i.family = "three_chain";
    return i;
}

Instance Instance::from_space(Space s, PointSet e, std::string name) {
    Instance i;
    i.family = "custom";
    i.custom = std::move(s);
    i.custom_set = std::move(e);
    i.custom_name = std::move(name);
    return i;
}

// --- checks --------------------------------------------------------------------

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& sp : specs())
            v.push_back(sp.id);
        return v;
    }();
    return ids;
}

bool is_check_id(const std::string& id) { return find_spec(id) != nullptr; }

CheckResult run_check(const std::string& check_id, const Instance& inst, const CheckConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    res.check_id = check_id;
    res.instance = inst.label();
    res.params = cfg.params;
    const CheckSpec* sp = find_spec(check_id);
    if (!sp)
        throw Error("unknown check id " + check_id);
    try {
        const Env env = make_env(inst);
        Measure m = run_measure(*sp, inst, env, cfg);
        res.hypotheses = m.hyps;
        res.lhs = m.lhs;
        res.rhs = m.rhs;
        res.measured_constant = m.c;
        res.explicit_bound = m.bound;
        res.detail = m.detail;
        if (!hyps_hold(m.hyps)) {
            res.status = "hypothesis-skipped";
            res.pass = false;
        } else if (sp->explicit_constant) {
            res.pass = m.exact_ok && m.lhs <= *m.bound * m.rhs * (1 + cfg.slack);
        } else if (check_id == "ball_example_decay" || check_id == "density_equiv") {
            res.pass = m.exact_ok;
        } else {
            bool ok = m.exact_ok && std::isfinite(m.c);
            if (ok && inst.refinable()) {
                const Instance fine = inst.refined();
                const Env env1 = make_env(fine);
                const Measure m1 = run_measure(*sp, fine, env1, cfg);
                res.refined_constant = m1.c;
                if (!hyps_hold(m1.hyps))
                    res.detail += "; hypotheses fail on " + fine.label();
                ok = hyps_hold(m1.hyps) && m1.exact_ok && stable(m.c, m1.c, cfg.drift);
            }
            res.pass = ok;
        }
        if (res.status.empty())
            res.status = res.pass ? "pass" : "fail";
    } catch (const std::exception& ex) {
        res.status = "fail";
        res.pass = false;
        res.detail = std::string("error: ") + ex.what();
    }
    res.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// --- suite ---------------------------------------------------------------------

std::vector<SuiteEntry> default_suite(const CheckConfig& cfg) {
    std::vector<SuiteEntry> out;
    CapacityParams small = cfg.params;
    small.beta = cfg.small_beta;
    CapacityParams dens = cfg.params;
    dens.beta = 0.9;
    dens.p = 2;
    dens.q = kInf;
    auto add = [&](const std::string& id, const Instance& inst, std::optional<CapacityParams> p = std::nullopt) {
        out.push_back({id, inst, p});
    };
    const std::vector<std::string> exact = {"duality", "disc_vs_H", "m_twosided", "riesz_twosided", "leibniz",
                                            "riesz_vs_tl"};
    for (const Instance& i : {Instance::two_point(), Instance::three_chain(), Instance::grid(1, 4)})
        for (const auto& id : exact)
            add(id, i);
    for (const auto& id : {"disc_vs_H", "m_twosided", "riesz_twosided"})
        add(id, Instance::grid(1, 8));
    for (const auto& id : {"disc_vs_H", "m_twosided", "riesz_twosided", "riesz_vs_tl"})
        add(id, Instance::cantor(1.0 / 3, 4));
    add("ball_example_decay", Instance::grid(1, 4), small);
    add("ball_upper", Instance::grid(1, 6));
    add("pot_norm", Instance::grid(1, 5));
    add("mw", Instance::grid(1, 5));
    add("q_indep", Instance::grid(1, 6));
    add("pot_sobolev", Instance::grid(1, 5), small);
    add("poincare", Instance::grid(1, 6));
    add("ball_lower", Instance::grid(1, 6));
    add("equiv_upper", Instance::grid(1, 6), small);
    add("equiv_lower", Instance::grid(1, 7));
    add("hc_lower", Instance::grid(1, 7));
    add("density_equiv", Instance::cantor(1.0 / 3, std::min(5, cfg.cantor_max_depth)), dens);
    return out;
}

int Report::failures() const {
    return static_cast<int>(std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.status == "fail"; }));
}

Report run_suite(const std::vector<SuiteEntry>& entries, const CheckConfig& cfg, int jobs) {
    Report rep;
    rep.seed = cfg.seed;
    rep.results.resize(entries.size());
    auto one = [&](std::size_t i) {
        CheckConfig c = cfg;
        if (entries[i].params)
            c.params = *entries[i].params;
        rep.results[i] = run_check(entries[i].check_id, entries[i].instance, c);
    };
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < entries.size(); ++i)
            one(i);
        return rep;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < entries.size(); i = next++)
                one(i);
        });
    for (auto& th : pool)
        th.join();
    return rep;
}

namespace {

nlohmann::ordered_json num(double v) {
    if (std::isfinite(v))
        return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string report_json(const Report& r, bool timings) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["seed"] = r.seed;
    doc["checks"] = r.results.size();
    doc["failures"] = r.failures();
    ordered_json arr = ordered_json::array();
    for (const CheckResult& c : r.results) {
        ordered_json o;
        o["check_id"] = c.check_id;
        o["instance"] = c.instance;
        o["status"] = c.status;
        o["pass"] = c.pass;
        o["params"] = {{"beta", num(c.params.beta)},
                       {"p", num(c.params.p)},
                       {"q", num(c.params.q)},
                       {"Lambda", num(c.params.Lambda)}};
        ordered_json hs = ordered_json::array();
        for (const Hypothesis& h : c.hypotheses)
            hs.push_back({{"name", h.name}, {"holds", h.holds}, {"approximated", h.approximated}, {"detail", h.detail}});
        o["hypotheses"] = hs;
        o["lhs"] = num(c.lhs);
        o["rhs"] = num(c.rhs);
        o["measured_constant"] = num(c.measured_constant);
        o["explicit_bound"] = c.explicit_bound ? num(*c.explicit_bound) : ordered_json(nullptr);
        o["refined_constant"] = c.refined_constant ? num(*c.refined_constant) : ordered_json(nullptr);
        o["detail"] = c.detail;
        if (timings)
            o["runtime"] = c.runtime;
        arr.push_back(std::move(o));
    }
    doc["results"] = std::move(arr);
    return doc.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    os << "check_id,instance,lhs,rhs,ratio\n";
    char buf[128];
    for (const CheckResult& c : r.results) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", c.lhs, c.rhs, c.measured_constant);
        os << c.check_id << "," << c.instance << "," << buf << "\n";
    }
    return os.str();
}

}  // namespace capkit::verify
