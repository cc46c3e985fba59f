#include "capkit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capkit {

double conjugate(double p) {
    if (p == 1)
        return kInf;
    if (std::isinf(p))
        return 1;
    return p / (p - 1);
}

PointSet all_points(const Space& s) {
    PointSet e(s.size());
    std::iota(e.begin(), e.end(), 0);
    return e;
}

double lq_norm(const std::vector<double>& v, double q) {
    if (std::isinf(q)) {
        double m = 0;
        for (double t : v)
            m = std::max(m, std::abs(t));
        return m;
    }
    double acc = 0;
    for (double t : v)
        acc += std::pow(std::abs(t), q);
    return std::pow(acc, 1 / q);
}

namespace {

void check_p(double p) {
    if (!(p > 1))
        throw Error("mixed_norm: p must exceed 1");
}

double outer_norm(const Space& s, const PointSet& domain, const std::vector<double>& inner, double p) {
    double acc = 0;
    for (std::size_t k = 0; k < domain.size(); ++k)
        acc += s.mass(domain[k]) * std::pow(inner[k], p);
    return std::pow(acc, 1 / p);
}

}  // namespace

double mixed_norm(const Space& s, const ScaleSequence& f, const PointSet& domain, double p, double q) {
    check_p(p);
    std::vector<double> inner;
    std::vector<double> v(static_cast<std::size_t>(f.window.count()) + 1);
    for (int x : domain) {
        for (int n = f.window.n0; n <= f.window.n_max; ++n)
            v[static_cast<std::size_t>(n - f.window.n0)] = f.at(n, x);
        v.back() = f.tail[x];
        inner.push_back(lq_norm(v, q));
    }
    return outer_norm(s, domain, inner, p);
}

double mixed_norm(const Space& s, const GradientSequence& g, const PointSet& domain, double p, double q) {
    check_p(p);
    std::vector<double> inner;
    std::vector<double> v;
    for (int x : domain) {
        v.clear();
        for (const auto& [k, vals] : g.g)
            v.push_back(vals[x]);
        inner.push_back(lq_norm(v, q));
    }
    return outer_norm(s, domain, inner, p);
}

PointFunction max_noncentered(const Space& s, const PointFunction& f) {
    const int n = static_cast<int>(s.size());
    PointFunction out(n, 0.0);
    std::vector<double> level_avg;
    std::vector<int> level_of(n);
    for (int c = 0; c < n; ++c) {
        const auto& ord = s.order(c);
        const auto& sd = s.sorted_dist(c);
        level_avg.clear();
        double fm = 0, m = 0;
        for (int k = 0; k < n; ++k) {
            int y = ord[k];
            fm += std::abs(f[y]) * s.mass(y);
            m += s.mass(y);
            level_of[k] = static_cast<int>(level_avg.size());
            if (k + 1 == n || sd[k + 1] != sd[k])
                level_avg.push_back(fm / m);
        }
        for (int k = static_cast<int>(level_avg.size()) - 2; k >= 0; --k)
            level_avg[k] = std::max(level_avg[k], level_avg[k + 1]);
        for (int k = 0; k < n; ++k)
            out[ord[k]] = std::max(out[ord[k]], level_avg[level_of[k]]);
    }
    return out;
}

PointFunction frac_max(const Space& s, const PointMeasure& nu, double beta) {
    const int n = static_cast<int>(s.size());
    const ScaleWindow w = scale_window(s);
    const double rmax = std::ldexp(1.0, -w.n0);
    PointFunction out(n, 0.0);
    for (int x = 0; x < n; ++x) {
        const auto& ord = s.order(x);
        const auto& sd = s.sorted_dist(x);
        double vm = 0, m = 0, best = 0;
        for (int k = 0; k < n; ++k) {
            vm += nu[ord[k]];
            m += s.mass(ord[k]);
            if (k + 1 < n && sd[k + 1] == sd[k])
                continue;
            // ball {d <= sd[k]} is B(x, r) for r up to the next distance
            double r = k + 1 < n ? std::min(sd[k + 1], rmax) : rmax;
            best = std::max(best, std::pow(r, beta) * vm / m);
        }
        out[x] = best;
    }
    return out;
}

double tail_weight(const ScaleWindow& w, double beta, double q_dual) {
    const double lead = std::pow(2.0, -beta * w.tail_start);
    if (std::isinf(q_dual))
        return lead;
    return lead * std::pow(1 - std::pow(2.0, -beta * q_dual), -1 / q_dual);
}

PointFunction potential_H(const Space& s, const ScaleSequence& f, double beta, double tail_coeff) {
    const int np = static_cast<int>(s.size());
    PointFunction out(np, 0.0);
    std::vector<double> c(np);
    for (int n = f.window.n0; n <= f.window.n_max; ++n) {
        const double r = std::ldexp(1.0, -n);
        const double wn = std::pow(2.0, -beta * n);
        for (int y = 0; y < np; ++y)
            c[y] = s.mass(y) * f.at(n, y) / s.ball_mass(y, r);
        for (int x = 0; x < np; ++x) {
            double acc = 0;
            for (int y = 0; y < np; ++y)
                if (s.d(x, y) < r)
                    acc += c[y];
            out[x] += wn * acc;
        }
    }
    if (tail_coeff != 0)
        for (int x = 0; x < np; ++x)
            out[x] += tail_coeff * f.tail[x];
    return out;
}

double PartitionOfUnity::value(std::size_t i, int x) const {
    const auto& row = psi[i];
    auto it = std::lower_bound(row.begin(), row.end(), x, [](const auto& a, int v) { return a.first < v; });
    return (it != row.end() && it->first == x) ? it->second : 0.0;
}

PartitionOfUnity partition_of_unity(const Space& s, int n) {
    const int np = static_cast<int>(s.size());
    const double unit = std::ldexp(1.0, -n);
    PartitionOfUnity pu;
    pu.n = n;
    for (int x = 0; x < np; ++x) {
        bool far = true;
        for (int c : pu.centers)
            if (s.d(x, c) < unit / 2) {
                far = false;
                break;
            }
        if (far)
            pu.centers.push_back(x);
    }
    const std::size_t nc = pu.centers.size();
    std::vector<double> total(np, 0.0);
    std::vector<int> overlap(np, 0);
    pu.psi.assign(nc, {});
    for (std::size_t i = 0; i < nc; ++i) {
        const int c = pu.centers[i];
        for (int x = 0; x < np; ++x) {
            double t = std::clamp((6 * unit - s.d(x, c)) / (3 * unit), 0.0, 1.0);
            if (s.d(x, c) < 6 * unit)
                ++overlap[x];
            if (t > 0) {
                pu.psi[i].push_back({x, t});
                total[x] += t;
            }
        }
    }
    for (auto& row : pu.psi)
        for (auto& [x, v] : row)
            v /= total[x];
    pu.N_overlap = *std::max_element(overlap.begin(), overlap.end());
    pu.kappa = 1;
    for (std::size_t i = 0; i < nc; ++i)
        for (auto [x, v] : pu.psi[i])
            if (s.d(x, pu.centers[i]) < 3 * unit)
                pu.kappa = std::min(pu.kappa, v);
    // Lipschitz constant in units of 2^n: pairs with at least one end in the support
    double lip = 0;
    std::vector<double> dense(np);
    for (std::size_t i = 0; i < nc; ++i) {
        std::fill(dense.begin(), dense.end(), 0.0);
        for (auto [x, v] : pu.psi[i])
            dense[x] = v;
        for (auto [x, v] : pu.psi[i])
            for (int y = 0; y < np; ++y)
                if (y != x)
                    lip = std::max(lip, std::abs(v - dense[y]) / (s.d(x, y) / unit));
    }
    pu.L_pou = lip;
    return pu;
}

std::vector<PartitionOfUnity> partitions_for_window(const Space& s, const ScaleWindow& w) {
    std::vector<PartitionOfUnity> parts;
    for (int n = w.n0; n <= w.n_max; ++n)
        parts.push_back(partition_of_unity(s, n));
    return parts;
}

PointFunction potential_L(const Space& s, const ScaleSequence& f, double beta) {
    return potential_L(s, f, beta, partitions_for_window(s, f.window));
}

PointFunction potential_L(const Space& s, const ScaleSequence& f, double beta,
                          const std::vector<PartitionOfUnity>& parts) {
    const int np = static_cast<int>(s.size());
    PointFunction out(np, 0.0);
    for (const auto& pu : parts) {
        const int n = pu.n;
        const double unit = std::ldexp(1.0, -n);
        const double wn = std::pow(2.0, -beta * n);
        for (std::size_t i = 0; i < pu.centers.size(); ++i) {
            const int c = pu.centers[i];
            const auto& ord = s.order(c);
            std::size_t cnt = s.ball_count(c, 3 * unit);
            double fm = 0;
            for (std::size_t k = 0; k < cnt; ++k)
                fm += f.at(n, ord[k]) * s.mass(ord[k]);
            const double avg = fm / s.cum_mass(c)[cnt - 1];
            for (auto [x, v] : pu.psi[i])
                out[x] += wn * v * avg;
        }
    }
    return out;
}

PointFunction riesz_I(const Space& s, const PointMeasure& nu, double beta) {
    const int np = static_cast<int>(s.size());
    PointFunction out(np, 0.0);
    for (int x = 0; x < np; ++x) {
        double acc = 0;
        for (int y = 0; y < np; ++y) {
            if (y == x || nu[y] == 0)
                continue;
            double d = s.d(x, y);
            acc += std::pow(d, beta) / s.ball_mass(x, d) * nu[y];
        }
        out[x] = acc;
    }
    return out;
}

PointFunction riesz_I_density(const Space& s, const PointFunction& f, double beta) {
    PointMeasure nu(f.size());
    for (std::size_t y = 0; y < f.size(); ++y)
        nu[y] = f[y] * s.mass(static_cast<int>(y));
    return riesz_I(s, nu, beta);
}

double HdualValues::point_norm(int x) const {
    if (std::isinf(q_dual)) {
        double m = tail[x];
        for (int n = window.n0; n <= window.n_max; ++n)
            m = std::max(m, at(n, x));
        return m;
    }
    double acc = tail[x];
    for (int n = window.n0; n <= window.n_max; ++n)
        acc += std::pow(at(n, x), q_dual);
    return std::pow(acc, 1 / q_dual);
}

HdualValues hdual_sequence(const Space& s, const PointMeasure& nu, double beta, double q_dual) {
    return hdual_sequence(s, scale_window(s), nu, beta, q_dual);
}

HdualValues hdual_sequence(const Space& s, const ScaleWindow& w, const PointMeasure& nu, double beta, double q_dual) {
    const int np = static_cast<int>(s.size());
    HdualValues h;
    h.window = w;
    h.npts = s.size();
    h.q_dual = q_dual;
    h.head.assign(static_cast<std::size_t>(w.count()) * h.npts, 0.0);
    h.tail.assign(h.npts, 0.0);
    std::vector<double> cnu(np);
    for (int x = 0; x < np; ++x) {
        const auto& ord = s.order(x);
        double acc = 0;
        for (int k = 0; k < np; ++k) {
            acc += nu[ord[k]];
            cnu[k] = acc;
        }
        for (int n = w.n0; n <= w.n_max; ++n) {
            const double r = std::ldexp(1.0, -n);
            std::size_t cnt = s.ball_count(x, r);
            h.head[static_cast<std::size_t>(n - w.n0) * h.npts + x] =
                std::pow(2.0, -beta * n) * cnu[cnt - 1] / s.cum_mass(x)[cnt - 1];
        }
        const double a = nu[x] / s.mass(x);
        if (std::isinf(q_dual))
            h.tail[x] = a * std::pow(2.0, -beta * w.tail_start);
        else
            h.tail[x] = std::pow(a, q_dual) * std::pow(2.0, -beta * q_dual * w.tail_start) /
                        (1 - std::pow(2.0, -beta * q_dual));
    }
    return h;
}

double hdual_norm(const Space& s, const HdualValues& h, double p) {
    double acc = 0;
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        acc += s.mass(x) * std::pow(h.point_norm(x), p);
    return std::pow(acc, 1 / p);
}

PairBuckets hajlasz_pair_buckets(const Space& s, const PointSet& omega) {
    PairBuckets b;
    for (std::size_t i = 0; i < omega.size(); ++i)
        for (std::size_t j = i + 1; j < omega.size(); ++j)
            b[bucket_of(s.d(omega[i], omega[j]))].push_back({omega[i], omega[j]});
    return b;
}

GradientCheck is_fractional_gradient(const Space& s, const PointFunction& u, const GradientSequence& g,
                                     const PointSet& omega, double beta, double tol) {
    GradientCheck res;
    for (std::size_t i = 0; i < omega.size(); ++i)
        for (std::size_t j = i + 1; j < omega.size(); ++j) {
            const int x = omega[i], y = omega[j];
            const double d = s.d(x, y);
            const int k = bucket_of(d);
            const double lhs = std::abs(u[x] - u[y]);
            const double rhs = std::pow(d, beta) * (g.at(k, x) + g.at(k, y));
            const double excess = lhs - rhs;
            if (excess > tol * std::max(1.0, lhs) && excess > res.excess) {
                res.ok = false;
                res.x = x;
                res.y = y;
                res.excess = excess;
            }
        }
    return res;
}

double lipschitz_constant(const Space& s, const PointFunction& eta) {
    double lip = 0;
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        for (int y = x + 1; y < static_cast<int>(s.size()); ++y)
            lip = std::max(lip, std::abs(eta[x] - eta[y]) / s.d(x, y));
    return lip;
}

GradientSequence leibniz_gradient(const Space& s, const PointFunction& u, const GradientSequence& g,
                                  const PointFunction& eta, double eta_lip, double eta_sup, double beta) {
    const int np = static_cast<int>(s.size());
    const double lip = lipschitz_constant(s, eta);
    if (lip > eta_lip * (1 + 1e-12) + 1e-15)
        throw Error("leibniz_gradient: cutoff is not eta_lip-Lipschitz (measured " + std::to_string(lip) + ")");
    for (int x = 0; x < np; ++x)
        if (std::abs(eta[x]) > eta_sup * (1 + 1e-12))
            throw Error("leibniz_gradient: |eta| exceeds eta_sup");
    GradientSequence rho;
    std::vector<int> scales;
    for (const auto& [k, pairs] : hajlasz_pair_buckets(s, all_points(s)))
        scales.push_back(k);
    for (const auto& [k, vals] : g.g)
        scales.push_back(k);
    for (int k : scales) {
        if (rho.g.count(k))
            continue;
        std::vector<double> r(np, 0.0);
        const double wk = std::pow(2.0, k * (beta - 1));
        for (int x = 0; x < np; ++x)
            if (eta[x] != 0)
                r[x] = g.at(k, x) * eta_sup + wk * eta_lip * std::abs(u[x]);
        rho.g[k] = std::move(r);
    }
    return rho;
}

GradientSequence pointwise_gradient(const Space& s, const PointFunction& u, const PointSet& omega, double beta) {
    GradientSequence g;
    for (const auto& [k, pairs] : hajlasz_pair_buckets(s, omega)) {
        auto& v = g.g[k];
        v.assign(s.size(), 0.0);
        for (auto [x, y] : pairs) {
            const double c = 0.5 * std::abs(u[x] - u[y]) / std::pow(s.d(x, y), beta);
            v[x] = std::max(v[x], c);
            v[y] = std::max(v[y], c);
        }
    }
    return g;
}

PointFunction dyadic_frac_max(const Space& s, const PointMeasure& nu, double beta) {
    HdualValues h = hdual_sequence(s, nu, beta, kInf);
    PointFunction out(s.size());
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        out[x] = h.point_norm(x);
    return out;
}

}  // namespace capkit
