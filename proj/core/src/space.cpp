#include "capkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace capkit {

Space::Space(std::vector<std::string> ids, std::vector<double> mass, std::vector<double> dist,
             std::vector<std::vector<double>> coords)
    : ids_(std::move(ids)), mass_(std::move(mass)), dist_(std::move(dist)), coords_(std::move(coords)) {
    const std::size_t n = ids_.size();
    if (mass_.size() != n || dist_.size() != n * n)
        throw Error("space: inconsistent sizes");
    if (n > kMaxPoints)
        throw Error("space: size cap exceeded (" + std::to_string(n) + " > " + std::to_string(kMaxPoints) + ")");
    order_.resize(n);
    sdist_.resize(n);
    cmass_.resize(n);
    min_dist_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        auto& ord = order_[i];
        ord.resize(n);
        std::iota(ord.begin(), ord.end(), 0);
        const double* row = &dist_[i * n];
        std::stable_sort(ord.begin(), ord.end(), [row](int a, int b) { return row[a] < row[b]; });
        sdist_[i].resize(n);
        cmass_[i].resize(n);
        double acc = 0;
        for (std::size_t k = 0; k < n; ++k) {
            sdist_[i][k] = row[ord[k]];
            acc += mass_[ord[k]];
            cmass_[i][k] = acc;
        }
        diam_ = std::max(diam_, sdist_[i].back());
        if (n > 1)
            min_dist_ = std::min(min_dist_, sdist_[i][1]);
    }
    total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

int Space::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id)
            return static_cast<int>(i);
    return -1;
}

std::size_t Space::ball_count(int i, double r, bool closed) const {
    const auto& sd = sdist_[i];
    auto it = closed ? std::upper_bound(sd.begin(), sd.end(), r) : std::lower_bound(sd.begin(), sd.end(), r);
    return static_cast<std::size_t>(it - sd.begin());
}

double Space::ball_mass(int i, double r, bool closed) const {
    std::size_t c = ball_count(i, r, closed);
    return c == 0 ? 0.0 : cmass_[i][c - 1];
}

ValidationReport validate_metric(const Space& s, double sym_tol, bool check_triangle) {
    ValidationReport rep;
    const int n = static_cast<int>(s.size());
    auto fail = [&](const char* axiom, std::vector<int> w, std::string msg) {
        rep.ok = false;
        rep.axiom = axiom;
        rep.witness = std::move(w);
        rep.message = std::move(msg);
        return rep;
    };
    if (n < 2)
        return fail("size", {}, "at least 2 points required");
    for (int i = 0; i < n; ++i)
        if (!(s.mass(i) > 0) || !std::isfinite(s.mass(i)))
            return fail("mass", {i}, "mass of " + s.id(i) + " is not positive");
    for (int i = 0; i < n; ++i) {
        if (s.d(i, i) != 0)
            return fail("identity", {i, i}, "d(" + s.id(i) + "," + s.id(i) + ") != 0");
        for (int j = i + 1; j < n; ++j) {
            double a = s.d(i, j), b = s.d(j, i);
            if (!std::isfinite(a) || !std::isfinite(b))
                return fail("identity", {i, j}, "non-finite distance");
            if (std::abs(a - b) > sym_tol * std::max(1.0, std::max(std::abs(a), std::abs(b))))
                return fail("symmetry", {i, j}, "d(" + s.id(i) + "," + s.id(j) + ") != d(" + s.id(j) + "," + s.id(i) + ")");
            if (!(a > 0))
                return fail("identity", {i, j}, "d(" + s.id(i) + "," + s.id(j) + ") is not positive");
        }
    }
    if (!check_triangle)
        return rep;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                double lhs = s.d(x, z), rhs = s.d(x, y) + s.d(y, z);
                if (lhs > rhs * (1 + 1e-12) + 1e-15)
                    return fail("triangle", {x, y, z},
                                "d(" + s.id(x) + "," + s.id(z) + ") > d(" + s.id(x) + "," + s.id(y) + ") + d(" + s.id(y) +
                                    "," + s.id(z) + ")");
            }
    return rep;
}

namespace {

// smallest integer n with 2^{-n} <= t
int smallest_exponent_below(double t) {
    int n = static_cast<int>(std::ceil(-std::log2(t)));
    while (std::ldexp(1.0, -n) > t)
        ++n;
    while (std::ldexp(1.0, -(n - 1)) <= t)
        --n;
    return n;
}

}  // namespace

ScaleWindow scale_window(const Space& s, int extra_head) {
    ScaleWindow w;
    w.n0 = smallest_exponent_below(2 * s.diam());
    w.n_max = smallest_exponent_below(s.min_dist()) + extra_head;
    w.tail_start = w.n_max + 1;
    return w;
}

int bucket_of(double d) {
    int k = static_cast<int>(std::floor(-std::log2(d)));
    while (d < std::ldexp(1.0, -k - 1))
        ++k;
    while (d >= std::ldexp(1.0, -k))
        --k;
    return k;
}

PointSet ball(const Space& s, int center, double r, bool closed) {
    std::size_t c = s.ball_count(center, r, closed);
    PointSet out(s.order(center).begin(), s.order(center).begin() + static_cast<std::ptrdiff_t>(c));
    std::sort(out.begin(), out.end());
    return out;
}

double ball_measure(const Space& s, int center, double r, bool closed) { return s.ball_mass(center, r, closed); }

double set_measure(const Space& s, const PointSet& e) {
    double m = 0;
    for (int i : e)
        m += s.mass(i);
    return m;
}

double doubling_constant(const Space& s) {
    const int n = static_cast<int>(s.size());
    double c = 1;
    for (int x = 0; x < n; ++x) {
        const auto& sd = s.sorted_dist(x);
        for (int k = 1; k < n; ++k) {
            if (sd[k] == sd[k - 1])
                continue;
            for (double r : {sd[k], 0.5 * sd[k]}) {
                double small = s.ball_mass(x, r);
                double big = s.ball_mass(x, 2 * r);
                c = std::max(c, big / small);
            }
        }
    }
    return c;
}

namespace {

std::vector<double> distinct_radii(const Space& s, int x) {
    std::vector<double> r;
    const auto& sd = s.sorted_dist(x);
    for (std::size_t k = 1; k < sd.size(); ++k)
        if (r.empty() || sd[k] != r.back())
            r.push_back(sd[k]);
    r.push_back(2 * s.diam());
    return r;
}

}  // namespace

SpaceStats estimate_stats(const Space& s) {
    SpaceStats st;
    const int n = static_cast<int>(s.size());
    st.c_mu = doubling_constant(s);

    // c_R over radii 2*nn(x) < r < diam/2; atoms make smaller radii trivial.
    double cr = 0;
    bool any = false;
    for (int x = 0; x < n; ++x) {
        const double nn = s.sorted_dist(x)[1];
        for (double d : distinct_radii(s, x))
            for (double r : {d, 2 * d}) {
                if (r <= 2 * nn * (1 + 1e-9) || r >= s.diam() / 2 * (1 - 1e-9))
                    continue;
                any = true;
                cr = std::max(cr, s.ball_mass(x, r / 2) / s.ball_mass(x, r));
            }
    }
    if (any && cr < 1)
        st.c_R = cr;

    // sigma: least-squares slope of log mass ratio vs log radius ratio over
    // dyadic radii pairs; c_sigma: smallest constant over all candidate pairs.
    const ScaleWindow w = scale_window(s);
    double sxx = 0, sxy = 0, sx = 0, sy = 0;
    std::size_t cnt = 0;
    for (int x = 0; x < n; ++x) {
        std::vector<double> logm;
        for (int m = w.n0; m <= w.n_max + 1; ++m)
            logm.push_back(std::log(s.ball_mass(x, std::ldexp(1.0, -m))));
        for (std::size_t a = 0; a < logm.size(); ++a)
            for (std::size_t b = a + 1; b < logm.size(); ++b) {
                double lx = -static_cast<double>(b - a) * std::log(2.0);  // log(r/R)
                double ly = logm[b] - logm[a];
                sxx += lx * lx;
                sxy += lx * ly;
                sx += lx;
                sy += ly;
                ++cnt;
            }
    }
    double denom = static_cast<double>(cnt) * sxx - sx * sx;
    double slope = (cnt > 1 && std::abs(denom) > 1e-300) ? (static_cast<double>(cnt) * sxy - sx * sy) / denom : 0.0;
    if (!(slope > 1e-12)) {
        st.sigma_degenerate = true;
        slope = std::max(slope, 1e-12);
    }
    st.sigma = slope;
    double csig = 0;
    for (int x = 0; x < n; ++x) {
        auto radii = distinct_radii(s, x);
        double best_a = 0;  // max over r < R of mu(B(x,r)) r^{-sigma}
        for (double R : radii) {
            double b = s.ball_mass(x, R) * std::pow(R, -st.sigma);
            if (best_a > 0)
                csig = std::max(csig, best_a / b);
            best_a = std::max(best_a, s.ball_mass(x, R) * std::pow(R, -st.sigma));
        }
    }
    st.c_sigma = csig;
    return st;
}

Space euclidean_space(std::vector<std::string> ids, std::vector<double> mass, std::vector<std::vector<double>> coords) {
    const std::size_t n = coords.size();
    if (n > kMaxPoints)
        throw Error("space exceeds the size cap of " + std::to_string(kMaxPoints) + " points");
    std::vector<double> dist(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (coords[b].size() != coords[a].size())
                throw Error("coordinate tuples differ in length");
            double acc = 0;
            for (std::size_t k = 0; k < coords[a].size(); ++k) {
                const double t = coords[a][k] - coords[b][k];
                acc += t * t;
            }
            dist[a * n + b] = std::sqrt(acc);
        }
    return Space(std::move(ids), std::move(mass), std::move(dist), std::move(coords));
}

Space build_grid(int dim, int levels) {
    if (dim != 1 && dim != 2)
        throw Error("build_grid: dim must be 1 or 2");
    if (levels < 1 || levels > 12)
        throw Error("build_grid: levels must be in [1,12]");
    const std::size_t per = std::size_t{1} << levels;
    const std::size_t n = dim == 1 ? per : per * per;
    if (n > kMaxPoints)
        throw Error("build_grid: size cap exceeded");
    const double h = 1.0 / static_cast<double>(per);
    std::vector<std::vector<double>> coords;
    coords.reserve(n);
    if (dim == 1) {
        for (std::size_t i = 0; i < per; ++i)
            coords.push_back({(static_cast<double>(i) + 0.5) * h});
    } else {
        for (std::size_t i = 0; i < per; ++i)
            for (std::size_t j = 0; j < per; ++j)
                coords.push_back({(static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h});
    }
    std::vector<std::string> ids(n);
    for (std::size_t a = 0; a < n; ++a)
        ids[a] = std::to_string(a);
    std::vector<double> mass(n, 1.0 / static_cast<double>(n));
    return euclidean_space(std::move(ids), std::move(mass), std::move(coords));
}

Space build_line(int count, double spacing, double mass_each) {
    const std::size_t n = static_cast<std::size_t>(count);
    std::vector<std::string> ids(n);
    std::vector<double> mass(n, mass_each), dist(n * n);
    std::vector<std::vector<double>> coords(n);
    for (std::size_t a = 0; a < n; ++a) {
        ids[a] = std::to_string(a);
        coords[a] = {static_cast<double>(a) * spacing};
        for (std::size_t b = 0; b < n; ++b)
            dist[a * n + b] = std::abs(static_cast<double>(a) - static_cast<double>(b)) * spacing;
    }
    return Space(std::move(ids), std::move(mass), std::move(dist), std::move(coords));
}

CantorSpace build_cantor(double ratio, int depth) {
    if (!(ratio > 0 && ratio < 0.5))
        throw Error("build_cantor: ratio must be in (0,1/2)");
    if (depth < 0 || depth > 12)
        throw Error("build_cantor: depth must be in [0,12]");
    double cells = std::ceil(std::pow(1.0 / ratio, depth) - 1e-9);
    while (cells < 16)
        cells *= 2;
    if (cells > static_cast<double>(kMaxPoints))
        throw Error("build_cantor: size cap exceeded");
    const std::size_t n = static_cast<std::size_t>(cells);
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    for (int k = 0; k < depth; ++k) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : iv) {
            double len = (b - a) * ratio;
            next.push_back({a, a + len});
            next.push_back({b - len, b});
        }
        iv = std::move(next);
    }
    const double h = 1.0 / static_cast<double>(n);
    std::vector<std::string> ids(n);
    std::vector<double> mass(n, h), dist(n * n);
    std::vector<std::vector<double>> coords(n);
    for (std::size_t a = 0; a < n; ++a) {
        ids[a] = std::to_string(a);
        coords[a] = {(static_cast<double>(a) + 0.5) * h};
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            dist[a * n + b] = std::abs(coords[a][0] - coords[b][0]);
    CantorSpace out{Space(std::move(ids), std::move(mass), std::move(dist), coords), {}};
    const double eps = 1e-12;
    for (std::size_t a = 0; a < n; ++a) {
        double x = coords[a][0];
        for (auto [lo, hi] : iv)
            if (x >= lo - eps && x <= hi + eps) {
                out.set.push_back(static_cast<int>(a));
                break;
            }
    }
    return out;
}

Space two_point_space() { return Space({"a", "b"}, {1.0, 1.0}, {0.0, 1.0, 1.0, 0.0}); }

Space three_chain() {
    return Space({"0", "1", "2"}, {1.0, 1.0, 1.0}, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {{0.0}, {1.0}, {2.0}});
}

}  // namespace capkit
