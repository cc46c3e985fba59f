#include "capkit/capacity.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "programs.hpp"

namespace capkit {

using programs::Mat;
using programs::Vec;

void validate_params(const CapacityParams& prm, bool relative) {
    if (!(prm.beta > 0))
        throw Error("beta must be positive");
    if (relative && !(prm.beta < 1))
        throw Error("beta must lie in (0,1) for the relative capacity");
    if (!(prm.p > 1) || std::isinf(prm.p))
        throw Error("p must be finite and exceed 1");
    if (!(prm.q >= 1))
        throw Error("q must lie in [1, inf]");
    if (relative && !(prm.Lambda >= 2))
        throw Error("Lambda must be at least 2");
}

double default_tolerance() {
    if (const char* env = std::getenv("CAPKIT_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0)
            return v;
    }
    return 1e-6;
}

double relative_gap(double value, double dual_value) {
    return (value - dual_value) / std::max(value, 1e-300);
}

namespace {

double resolve_tol(const SolverOptions& opt) { return opt.tol > 0 ? opt.tol : default_tolerance(); }

PointSet normalized_set(const Space& s, PointSet e) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    for (int x : e)
        if (x < 0 || static_cast<std::size_t>(x) >= s.size())
            throw Error("set member out of range");
    return e;
}

// Rows of a measure-side program plus the point each row belongs to.
struct Layout {
    programs::MeasureProgram mp;
    std::vector<int> row_point;
    std::vector<int> row_scale;  // INT_MAX marks the collapsed tail
};

void finish_layout(Layout& L, const Space& s, const std::vector<std::vector<double>>& rows, std::size_t ne) {
    L.mp.G.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ne));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < ne; ++j)
            L.mp.G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = rows[r][j];
    std::map<int, int> dense;
    for (int y : L.row_point)
        dense.emplace(y, 0);
    int k = 0;
    for (auto& [y, idx] : dense) {
        idx = k++;
        L.mp.owner_mass.push_back(s.mass(y));
    }
    for (int y : L.row_point)
        L.mp.owner.push_back(dense[y]);
}

Layout tl_layout(const Space& s, const PointSet& e, const CapacityParams& prm, const ScaleWindow& w,
                 double tail_coeff) {
    Layout L;
    std::vector<std::vector<double>> rows;
    for (int y = 0; y < static_cast<int>(s.size()); ++y) {
        for (int n = w.n0; n <= w.n_max; ++n) {
            const double r = std::ldexp(1.0, -n);
            const double c = std::pow(2.0, -prm.beta * n) / s.ball_mass(y, r);
            std::vector<double> row(e.size(), 0.0);
            bool any = false;
            for (std::size_t j = 0; j < e.size(); ++j)
                if (s.d(e[j], y) < r) {
                    row[j] = c;
                    any = true;
                }
            if (!any)
                continue;
            rows.push_back(std::move(row));
            L.row_point.push_back(y);
            L.row_scale.push_back(n);
        }
        auto it = std::lower_bound(e.begin(), e.end(), y);
        if (it != e.end() && *it == y) {
            std::vector<double> row(e.size(), 0.0);
            row[static_cast<std::size_t>(it - e.begin())] = tail_coeff / s.mass(y);
            rows.push_back(std::move(row));
            L.row_point.push_back(y);
            L.row_scale.push_back(INT_MAX);
        }
    }
    finish_layout(L, s, rows, e.size());
    L.mp.p = prm.p;
    L.mp.q = prm.q;
    return L;
}

CapacityCertificate solve_tl(const Space& s, const PointSet& e0, const CapacityParams& prm, const SolverOptions& opt,
                             const char* solver_id) {
    validate_params(prm, false);
    const PointSet e = normalized_set(s, e0);
    CapacityCertificate c;
    c.kind = "tl";
    c.solver_id = solver_id;
    c.params = prm;
    c.set = e;
    c.sequence = ScaleSequence(scale_window(s, opt.extra_head), s.size());
    c.tail_coeff = tail_weight(c.sequence.window, prm.beta, conjugate(prm.q));
    c.dual.assign(s.size(), 0.0);
    if (e.empty())
        return c;
    Layout L = tl_layout(s, e, prm, c.sequence.window, c.tail_coeff);
    programs::MeasureSolution sol = programs::solve_measure_program(L.mp, resolve_tol(opt), opt.max_iterations);
    for (std::size_t r = 0; r < L.row_point.size(); ++r) {
        const int y = L.row_point[r];
        const double v = sol.v[static_cast<Eigen::Index>(r)];
        if (L.row_scale[r] == INT_MAX)
            c.sequence.tail[static_cast<std::size_t>(y)] = v;
        else
            c.sequence.at(L.row_scale[r], y) = v;
    }
    for (std::size_t j = 0; j < e.size(); ++j)
        c.dual[static_cast<std::size_t>(e[j])] = sol.nu[static_cast<Eigen::Index>(j)];
    c.value = sol.upper;
    c.dual_value = sol.lower;
    c.rel_gap = relative_gap(c.value, c.dual_value);
    c.iterations = sol.iterations;
    c.converged = sol.converged;
    return c;
}

}  // namespace

CapacityCertificate cap_tl_primal(const Space& s, const PointSet& e, const CapacityParams& prm,
                                  const SolverOptions& opt) {
    return solve_tl(s, e, prm, opt, "barrier-newton/primal");
}

CapacityCertificate cap_tl_dual(const Space& s, const PointSet& e, const CapacityParams& prm,
                                const SolverOptions& opt) {
    return solve_tl(s, e, prm, opt, "barrier-newton/dual");
}

double tl_dual_ratio(const Space& s, const PointMeasure& nu, const CapacityParams& prm, int extra_head) {
    const ScaleWindow w = scale_window(s, extra_head);
    const HdualValues h = hdual_sequence(s, w, nu, prm.beta, conjugate(prm.q));
    const double nrm = hdual_norm(s, h, conjugate(prm.p));
    double tot = 0;
    for (double v : nu)
        tot += v;
    if (!(nrm > 0))
        return 0;
    return std::pow(tot / nrm, prm.p);
}

CapacityCertificate cap_riesz(const Space& s, const PointSet& e0, double beta, double p, const SolverOptions& opt) {
    CapacityParams prm;
    prm.beta = beta;
    prm.p = p;
    prm.q = kInf;
    validate_params(prm, false);
    const PointSet e = normalized_set(s, e0);
    CapacityCertificate c;
    c.kind = "riesz";
    c.solver_id = "barrier-newton/measure";
    c.params = prm;
    c.set = e;
    c.density.assign(s.size(), 0.0);
    c.dual.assign(s.size(), 0.0);
    if (e.empty())
        return c;
    Layout L;
    std::vector<std::vector<double>> rows;
    for (int y = 0; y < static_cast<int>(s.size()); ++y) {
        std::vector<double> row(e.size(), 0.0);
        bool any = false;
        for (std::size_t j = 0; j < e.size(); ++j) {
            const int x = e[j];
            if (x == y)
                continue;
            const double d = s.d(x, y);
            row[j] = std::pow(d, beta) / s.ball_mass(x, d);
            any = true;
        }
        if (!any)
            continue;
        rows.push_back(std::move(row));
        L.row_point.push_back(y);
        L.row_scale.push_back(0);
    }
    finish_layout(L, s, rows, e.size());
    L.mp.p = p;
    L.mp.q = kInf;
    programs::MeasureSolution sol = programs::solve_measure_program(L.mp, resolve_tol(opt), opt.max_iterations);
    for (std::size_t r = 0; r < L.row_point.size(); ++r)
        c.density[static_cast<std::size_t>(L.row_point[r])] = sol.v[static_cast<Eigen::Index>(r)];
    for (std::size_t j = 0; j < e.size(); ++j)
        c.dual[static_cast<std::size_t>(e[j])] = sol.nu[static_cast<Eigen::Index>(j)];
    c.value = sol.upper;
    c.dual_value = sol.lower;
    c.rel_gap = relative_gap(c.value, c.dual_value);
    c.iterations = sol.iterations;
    c.converged = sol.converged;
    return c;
}

namespace {

using programs::Role;

bool in_outer(const Space& s, int center, double r, const CapacityParams& prm, int x) {
    const double d = s.d(center, x);
    return prm.outer_closed ? d <= prm.Lambda * r : d < prm.Lambda * r;
}

// g value used by the relaxed program for (x, k); slots are sorted.
double slot_value(const programs::RelSolution& sol, int x, int k, bool inf_q) {
    const auto& ks = sol.slots[static_cast<std::size_t>(x)];
    if (ks.empty())
        return 0;
    if (inf_q)
        return sol.g[static_cast<std::size_t>(x)][0];
    auto it = std::lower_bound(ks.begin(), ks.end(), k);
    if (it == ks.end() || *it != k)
        return 0;
    return sol.g[static_cast<std::size_t>(x)][static_cast<std::size_t>(it - ks.begin())];
}

bool pair_counts(Role a, Role b) {
    if (a == Role::Fixed1 && b == Role::Fixed1)
        return false;
    if (a == Role::Fixed0 && b == Role::Fixed0)
        return false;
    return true;
}

// Sign of the binding orientation: +1 when phi(x) - phi(y) is the side that can be positive.
int orient(Role rx, Role ry, double phx, double phy) {
    if (rx == Role::Fixed1 || ry == Role::Fixed0)
        return 1;
    if (ry == Role::Fixed1 || rx == Role::Fixed0)
        return -1;
    return phx >= phy ? 1 : -1;
}

}  // namespace

CapacityCertificate cap_relative(const Space& s, const PointSet& e0, int center, double r,
                                 const CapacityParams& prm, const SolverOptions& opt) {
    validate_params(prm, true);
    if (center < 0 || static_cast<std::size_t>(center) >= s.size())
        throw Error("center out of range");
    if (!(r > 0))
        throw Error("radius must be positive");
    const PointSet e = normalized_set(s, e0);
    for (int x : e)
        if (!(s.d(center, x) <= r))
            throw Error("set is not contained in the closed ball (point " + s.id(x) + ")");
    const double tol = resolve_tol(opt);
    const bool inf_q = std::isinf(prm.q);
    const int np = static_cast<int>(s.size());

    CapacityCertificate c;
    c.kind = "relative";
    c.solver_id = "barrier-newton/cutting-plane";
    c.params = prm;
    c.set = e;
    c.center = center;
    c.radius = r;
    c.phi.assign(s.size(), 0.0);

    programs::RelProgram rp;
    rp.role.assign(s.size(), Role::Outside);
    rp.mass = s.masses();
    rp.p = prm.p;
    rp.q = prm.q;
    std::vector<char> in_e(s.size(), 0);
    for (int x : e)
        in_e[static_cast<std::size_t>(x)] = 1;
    PointSet outer;
    bool any_zero = false;
    for (int x = 0; x < np; ++x) {
        if (!in_outer(s, center, r, prm, x))
            continue;
        outer.push_back(x);
        Role& ro = rp.role[static_cast<std::size_t>(x)];
        if (in_e[static_cast<std::size_t>(x)])
            ro = Role::Fixed1;
        else if (s.d(center, x) < 2 * r)
            ro = Role::Free;
        else {
            ro = Role::Fixed0;
            any_zero = true;
        }
    }
    const PairBuckets buckets = hajlasz_pair_buckets(s, outer);
    for (const auto& [k, pairs] : buckets)
        c.gradient.g[k].assign(s.size(), 0.0);
    if (e.empty())
        return c;
    if (!any_zero) {
        // phi = 1 on the outer ball costs nothing
        for (int x : outer)
            c.phi[static_cast<std::size_t>(x)] = 1;
        return c;
    }

    auto role = [&](int x) { return rp.role[static_cast<std::size_t>(x)]; };
    // initial cuts: nearest partner per (point, bucket)
    std::map<std::pair<int, int>, std::pair<double, int>> nearest;
    for (int x : outer)
        for (int y : outer) {
            if (x == y || !pair_counts(role(x), role(y)))
                continue;
            const double d = s.d(x, y);
            auto key = std::make_pair(x, bucket_of(d));
            auto it = nearest.find(key);
            if (it == nearest.end() || d < it->second.first)
                nearest[key] = {d, y};
        }
    std::map<std::tuple<int, int, int>, char> have;  // (x<y, sign relative to x<y)
    auto add_cut = [&](int x, int y, int sgn) {
        if (x > y) {
            std::swap(x, y);
            sgn = -sgn;
        }
        auto key = std::make_tuple(x, y, sgn);
        if (have.count(key))
            return false;
        have[key] = 1;
        programs::RelConstraint rc;
        rc.x = x;
        rc.y = y;
        rc.dbeta = std::pow(s.d(x, y), prm.beta);
        rc.k = bucket_of(s.d(x, y));
        rc.sign = sgn;
        rp.cons.push_back(rc);
        return true;
    };
    auto add_pair = [&](int x, int y) {
        const Role rx = role(x), ry = role(y);
        if (rx == Role::Free && ry == Role::Free) {
            add_cut(x, y, 1);
            add_cut(x, y, -1);
        } else {
            add_cut(x, y, orient(rx, ry, 0, 0));
        }
    };
    for (const auto& [key, val] : nearest)
        add_pair(key.first, val.second);

    programs::RelSolution sol;
    int iters = 0;
    for (int round = 0; round < 60; ++round) {
        sol = programs::solve_rel_program(rp, tol / 4, opt.max_iterations, round > 0 ? &sol : nullptr);
        iters += sol.iterations;
        // most violated pair per (point, bucket)
        std::map<std::pair<int, int>, std::pair<double, std::pair<int, int>>> worst;
        for (std::size_t i = 0; i < outer.size(); ++i)
            for (std::size_t j = i + 1; j < outer.size(); ++j) {
                const int x = outer[i], y = outer[j];
                if (!pair_counts(role(x), role(y)))
                    continue;
                const double d = s.d(x, y);
                const int k = bucket_of(d);
                const double lhs = std::abs(sol.phi[static_cast<std::size_t>(x)] - sol.phi[static_cast<std::size_t>(y)]);
                const double rhs = std::pow(d, prm.beta) * (slot_value(sol, x, k, inf_q) + slot_value(sol, y, k, inf_q));
                const double def = lhs - rhs;
                if (!(def > 1e-10))
                    continue;
                for (int z : {x, y}) {
                    auto& w = worst[{z, k}];
                    if (def > w.first)
                        w = {def, {x, y}};
                }
            }
        bool added = false;
        for (const auto& [key, val] : worst) {
            const int x = val.second.first, y = val.second.second;
            const Role rx = role(x), ry = role(y);
            const int sgn = orient(rx, ry, sol.phi[static_cast<std::size_t>(x)], sol.phi[static_cast<std::size_t>(y)]);
            added |= add_cut(x, y, sgn);
        }
        if (!added)
            break;
    }

    // gradient from the relaxed solution, then repair any residual violations
    for (auto& [k, vals] : c.gradient.g)
        for (int x : outer)
            vals[static_cast<std::size_t>(x)] = slot_value(sol, x, k, inf_q);
    for (int x : outer)
        c.phi[static_cast<std::size_t>(x)] = sol.phi[static_cast<std::size_t>(x)];
    for (const auto& [k, pairs] : buckets) {
        auto& vals = c.gradient.g[k];
        for (auto [x, y] : pairs) {
            const double d = s.d(x, y);
            const double db = std::pow(d, prm.beta);
            const double lhs = std::abs(c.phi[static_cast<std::size_t>(x)] - c.phi[static_cast<std::size_t>(y)]);
            const double def = lhs - db * (vals[static_cast<std::size_t>(x)] + vals[static_cast<std::size_t>(y)]);
            if (def > 0) {
                const double add = def / (2 * db) * (1 + 1e-12) + 1e-300;
                vals[static_cast<std::size_t>(x)] += add;
                vals[static_cast<std::size_t>(y)] += add;
            }
        }
    }
    c.value = std::pow(mixed_norm(s, c.gradient, outer, prm.p, prm.q), prm.p);
    c.dual_value = std::min(sol.lower, c.value);
    c.rel_gap = relative_gap(c.value, c.dual_value);
    c.iterations = iters;
    c.converged = sol.converged && c.rel_gap <= tol;
    return c;
}

ResidualReport certificate_residual(const Space& s, const CapacityCertificate& c) {
    ResidualReport rep;
    rep.max_violation = -kInf;
    const auto& prm = c.params;
    if (c.kind == "tl") {
        const PointFunction h = potential_H(s, c.sequence, prm.beta, c.tail_coeff);
        for (int x : c.set)
            rep.max_violation = std::max(rep.max_violation, 1 - h[static_cast<std::size_t>(x)]);
        rep.objective = std::pow(mixed_norm(s, c.sequence, all_points(s), prm.p, prm.q), prm.p);
    } else if (c.kind == "riesz") {
        const PointFunction h = riesz_I_density(s, c.density, prm.beta);
        for (int x : c.set)
            rep.max_violation = std::max(rep.max_violation, 1 - h[static_cast<std::size_t>(x)]);
        for (double v : c.density)
            rep.max_violation = std::max(rep.max_violation, -v);
        double acc = 0;
        for (int x = 0; x < static_cast<int>(s.size()); ++x)
            acc += s.mass(x) * std::pow(c.density[static_cast<std::size_t>(x)], prm.p);
        rep.objective = acc;
    } else if (c.kind == "relative") {
        PointSet outer;
        for (int x = 0; x < static_cast<int>(s.size()); ++x) {
            const double d = s.d(c.center, x);
            if (prm.outer_closed ? d <= prm.Lambda * c.radius : d < prm.Lambda * c.radius)
                outer.push_back(x);
            if (!(d < 2 * c.radius))
                rep.max_violation = std::max(rep.max_violation, std::abs(c.phi[static_cast<std::size_t>(x)]));
        }
        for (int x : c.set)
            rep.max_violation = std::max(rep.max_violation, 1 - c.phi[static_cast<std::size_t>(x)]);
        const GradientCheck gc = is_fractional_gradient(s, c.phi, c.gradient, outer, prm.beta, 0.0);
        rep.max_violation = std::max(rep.max_violation, gc.ok ? 0.0 : gc.excess);
        for (const auto& [k, vals] : c.gradient.g)
            for (double v : vals)
                rep.max_violation = std::max(rep.max_violation, -v);
        rep.objective = outer.empty() ? 0 : std::pow(mixed_norm(s, c.gradient, outer, prm.p, prm.q), prm.p);
    } else {
        throw Error("unknown certificate kind: " + c.kind);
    }
    if (rep.max_violation == -kInf)
        rep.max_violation = 0;
    return rep;
}

}  // namespace capkit
