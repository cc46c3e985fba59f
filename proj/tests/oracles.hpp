#pragma once
// Reference computations for the tests. Deliberately naive and written from
// the definitions; they share nothing with the library beyond Space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "capkit/space.hpp"

namespace oracle {

constexpr double inf = std::numeric_limits<double>::infinity();

// smallest integer n with 2^-n <= t
inline int first_scale_below(double t) {
    int n = -200;
    while (std::pow(2.0, -n) > t)
        ++n;
    return n;
}

inline double ball_mass(const capkit::Space& s, int x, double r) {
    double m = 0;
    for (int y = 0; y < static_cast<int>(s.size()); ++y)
        if (s.d(x, y) < r)
            m += s.mass(y);
    return m;
}

// ||H-check nu||_{L^pd(l^qd)}, the scale tail summed term by term.
inline double hdual_norm(const capkit::Space& s, const std::vector<double>& nu, double beta, double pd, double qd) {
    double diam = 0, mind = inf;
    const int np = static_cast<int>(s.size());
    for (int x = 0; x < np; ++x)
        for (int y = 0; y < np; ++y)
            if (x != y) {
                diam = std::max(diam, s.d(x, y));
                mind = std::min(mind, s.d(x, y));
            }
    const int n0 = first_scale_below(2 * diam);
    const int n_last = first_scale_below(mind) + 400;
    double outer = 0;
    for (int x = 0; x < np; ++x) {
        double inner = 0;
        for (int n = n0; n <= n_last; ++n) {
            const double r = std::pow(2.0, -n);
            double v = 0;
            for (int y = 0; y < np; ++y)
                if (s.d(x, y) < r)
                    v += nu[y];
            const double t = std::pow(2.0, -beta * n) * v / ball_mass(s, x, r);
            inner = std::isinf(qd) ? std::max(inner, t) : inner + std::pow(t, qd);
        }
        if (!std::isinf(qd))
            inner = std::pow(inner, 1 / qd);
        outer = std::isinf(pd) ? std::max(outer, inner) : outer + s.mass(x) * std::pow(inner, pd);
    }
    return std::isinf(pd) ? outer : std::pow(outer, 1 / pd);
}

inline double conj(double p) {
    if (p == 1)
        return inf;
    if (std::isinf(p))
        return 1;
    return p / (p - 1);
}

// (nu(E) / ||H-check nu||)^p for one measure
inline double dual_value(const capkit::Space& s, const std::vector<double>& nu, double beta, double p, double q) {
    double tot = 0;
    for (double v : nu)
        tot += v;
    return std::pow(tot / hdual_norm(s, nu, beta, conj(p), conj(q)), p);
}

// Maximizes a unimodal function on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
    }
    return std::max(fc, fd);
}

// min sum_i x_i^2 subject to A x >= b and x >= 0, by enumerating active sets
// (KKT: the optimum is the least-norm point of some active face with
// nonnegative multipliers). Fine for a handful of variables.
inline double min_norm_kkt(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           std::vector<double>* argmin = nullptr) {
    const std::size_t n = A.empty() ? 0 : A[0].size();
    std::vector<std::vector<double>> rows = A;
    std::vector<double> rhs = b;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1;
        rows.push_back(e);
        rhs.push_back(0);
    }
    const std::size_t m = rows.size();
    double best = inf;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<std::size_t> act;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1u)
                act.push_back(i);
        if (act.size() > n)
            continue;
        // x = R^T y with (R R^T) y = rhs_act
        const std::size_t k = act.size();
        std::vector<std::vector<double>> G(k, std::vector<double>(k + 1, 0.0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t t = 0; t < n; ++t)
                    G[i][j] += rows[act[i]][t] * rows[act[j]][t];
            G[i][k] = rhs[act[i]];
        }
        bool singular = false;
        for (std::size_t c = 0; c < k && !singular; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c; r < k; ++r)
                if (std::abs(G[r][c]) > std::abs(G[piv][c]))
                    piv = r;
            if (std::abs(G[piv][c]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(G[c], G[piv]);
            for (std::size_t r = 0; r < k; ++r)
                if (r != c) {
                    const double f = G[r][c] / G[c][c];
                    for (std::size_t j = c; j <= k; ++j)
                        G[r][j] -= f * G[c][j];
                }
        }
        if (singular)
            continue;
        std::vector<double> y(k), x(n, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            y[i] = G[i][k] / G[i][i];
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i)
            if (y[i] < -1e-12)
                ok = false;  // multiplier sign
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t t = 0; t < n; ++t)
                x[t] += rows[act[i]][t] * y[i];
        for (std::size_t i = 0; i < m && ok; ++i) {
            double v = 0;
            for (std::size_t t = 0; t < n; ++t)
                v += rows[i][t] * x[t];
            if (v < rhs[i] - 1e-12)
                ok = false;
        }
        if (!ok)
            continue;
        double val = 0;
        for (double v : x)
            val += v * v;
        if (val < best) {
            best = val;
            if (argmin)
                *argmin = x;
        }
    }
    return best;
}

struct Ball {
    std::uint32_t mask;
    double cost;
};

// Candidate open balls (center, radius) with radius a positive distance from
// the center or rho itself, capped at rho; mask = the part of F covered.
inline std::vector<Ball> content_candidates(const capkit::Space& s, const std::vector<int>& f, double d, double rho) {
    std::vector<Ball> out;
    const int np = static_cast<int>(s.size());
    for (int c = 0; c < np; ++c) {
        std::vector<double> radii{rho};
        for (int y = 0; y < np; ++y)
            if (s.d(c, y) > 0 && s.d(c, y) <= rho)
                radii.push_back(s.d(c, y));
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
        for (double r : radii) {
            std::uint32_t mask = 0;
            double m = 0;
            for (int y = 0; y < np; ++y)
                if (s.d(c, y) < r)
                    m += s.mass(y);
            for (std::size_t j = 0; j < f.size(); ++j)
                if (s.d(c, f[j]) < r)
                    mask |= 1u << j;
            if (mask)
                out.push_back({mask, m * std::pow(r, -d)});
        }
    }
    return out;
}

// Exhaustive minimum over all covers, by dynamic programming over the
// covered subsets of F.
inline double content_exhaustive(const std::vector<Ball>& balls, std::size_t fsize) {
    const std::uint32_t full = (1u << fsize) - 1;
    std::vector<double> best(full + 1, inf);
    best[0] = 0;
    for (std::uint32_t m = 0; m <= full; ++m) {
        if (std::isinf(best[m]))
            continue;
        for (const Ball& b : balls) {
            const std::uint32_t nm = m | b.mask;
            best[nm] = std::min(best[nm], best[m] + b.cost);
        }
    }
    return best[full];
}

// Random points in the unit square with random masses.
inline capkit::Space random_space(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::string> ids;
    std::vector<double> mass;
    std::vector<std::vector<double>> co;
    for (int i = 0; i < n; ++i) {
        ids.push_back("p" + std::to_string(i));
        mass.push_back(0.2 + u(rng));
        co.push_back({u(rng), u(rng)});
    }
    return capkit::euclidean_space(ids, mass, co);
}

}  // namespace oracle
