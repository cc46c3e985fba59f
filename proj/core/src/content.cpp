#include "capkit/content.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace capkit {

namespace {

constexpr double kBig = std::numeric_limits<double>::max();

void check_params(const ContentParams& prm) {
    if (!(prm.rho > 0))
        throw Error("content: rho must be positive");
    if (!(prm.d >= 0))
        throw Error("content: d must be nonnegative");
}

double ball_cost(double mass, double r, double d) { return d == 0 ? mass : mass * std::pow(r, -d); }

// Calls fn(center, radius, count) for each candidate radius of each center; the ball is
// the first `count` points of order(center).
template <class Fn>
void for_each_candidate(const Space& s, double rho, Fn&& fn) {
    for (int c = 0; c < static_cast<int>(s.size()); ++c) {
        const auto& sd = s.sorted_dist(c);
        for (std::size_t i = 1; i < sd.size(); ++i) {
            if (sd[i] > rho)
                break;
            if (sd[i] == sd[i - 1])
                continue;
            fn(c, sd[i], i);
        }
        fn(c, rho, s.ball_count(c, rho));
    }
}

struct Cand {
    std::uint32_t mask = 0;
    double cost = 0;
    int center = 0;
    double radius = 0;
};

bool cand_less(const Cand& a, const Cand& b) {
    if (a.cost != b.cost)
        return a.cost < b.cost;
    if (a.center != b.center)
        return a.center < b.center;
    return a.radius < b.radius;
}

struct Search {
    std::vector<std::vector<const Cand*>> by_elem;
    std::vector<double> cheapest;
    std::uint32_t full = 0;
    double best = 0;
    std::vector<const Cand*> stack, best_cover;

    void dfs(std::uint32_t covered, double cost) {
        if (covered == full) {
            if (cost < best) {
                best = cost;
                best_cover = stack;
            }
            return;
        }
        int first = -1;
        double lb = 0;
        for (int j = 0; j < static_cast<int>(cheapest.size()); ++j)
            if (!(covered >> j & 1u)) {
                if (first < 0)
                    first = j;
                lb = std::max(lb, cheapest[static_cast<std::size_t>(j)]);
            }
        if (cost + lb >= best * (1 - 1e-15))
            return;
        for (const Cand* c : by_elem[static_cast<std::size_t>(first)]) {
            if (cost + c->cost >= best * (1 - 1e-15))
                break;  // sorted by cost
            stack.push_back(c);
            dfs(covered | c->mask, cost + c->cost);
            stack.pop_back();
        }
    }
};

}  // namespace

Cover content_greedy(const Space& s, const PointSet& f0, const ContentParams& prm) {
    check_params(prm);
    PointSet f = f0;
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    Cover out;
    std::vector<char> need(s.size(), 0);
    std::size_t left = 0;
    for (int x : f) {
        need[static_cast<std::size_t>(x)] = 1;
        ++left;
    }
    // centers that can reach F at all
    std::vector<int> centers;
    for (int c = 0; c < static_cast<int>(s.size()); ++c)
        for (int x : f)
            if (s.d(c, x) < prm.rho) {
                centers.push_back(c);
                break;
            }
    while (left > 0) {
        double best_ratio = kBig, best_cost = kBig;
        int bc = -1;
        double br = 0;
        std::size_t bcount = 0;
        for (int c : centers) {
            const auto& ord = s.order(c);
            const auto& sd = s.sorted_dist(c);
            const auto& cm = s.cum_mass(c);
            std::size_t fresh = 0, i = 0;
            auto consider = [&](double r, std::size_t count) {
                while (i < count) {
                    fresh += need[static_cast<std::size_t>(ord[i])];
                    ++i;
                }
                if (fresh == 0)
                    return;
                const double cost = ball_cost(cm[count - 1], r, prm.d);
                const double ratio = cost / static_cast<double>(fresh);
                if (ratio < best_ratio || (ratio == best_ratio && cost < best_cost)) {
                    best_ratio = ratio;
                    best_cost = cost;
                    bc = c;
                    br = r;
                    bcount = count;
                }
            };
            for (std::size_t k = 1; k < sd.size(); ++k) {
                if (sd[k] > prm.rho)
                    break;
                if (sd[k] == sd[k - 1])
                    continue;
                consider(sd[k], k);
            }
            consider(prm.rho, s.ball_count(c, prm.rho));
        }
        if (bc < 0)
            throw Error("content_greedy: no candidate ball covers the remaining points");
        const auto& ord = s.order(bc);
        for (std::size_t i = 0; i < bcount; ++i) {
            auto& nd = need[static_cast<std::size_t>(ord[i])];
            if (nd) {
                nd = 0;
                --left;
            }
        }
        out.balls.push_back({bc, br, best_cost});
        out.total += best_cost;
    }
    return out;
}

Cover content_exact(const Space& s, const PointSet& f0, const ContentParams& prm) {
    check_params(prm);
    PointSet f = f0;
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    if (f.empty())
        return {};
    if (f.size() > kContentMaxSet)
        throw Error("content_exact: set has " + std::to_string(f.size()) + " points (limit " +
                    std::to_string(kContentMaxSet) + "); use content_greedy");
    std::vector<int> pos(s.size(), -1);
    for (std::size_t j = 0; j < f.size(); ++j)
        pos[static_cast<std::size_t>(f[j])] = static_cast<int>(j);

    // only the cheapest ball per covered subset can appear in an optimal cover
    std::map<std::uint32_t, Cand> best_by_mask;
    for_each_candidate(s, prm.rho, [&](int c, double r, std::size_t count) {
        const auto& ord = s.order(c);
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (pos[static_cast<std::size_t>(ord[i])] >= 0)
                mask |= 1u << pos[static_cast<std::size_t>(ord[i])];
        if (mask == 0)
            return;
        Cand cd{mask, ball_cost(s.cum_mass(c)[count - 1], r, prm.d), c, r};
        auto it = best_by_mask.find(mask);
        if (it == best_by_mask.end() || cand_less(cd, it->second))
            best_by_mask[mask] = cd;
    });
    if (best_by_mask.size() > kContentMaxBalls)
        throw Error("content_exact: more than " + std::to_string(kContentMaxBalls) +
                    " distinct candidate balls; use content_greedy");
    std::vector<Cand> cands;
    for (const auto& [m, cd] : best_by_mask)
        cands.push_back(cd);
    std::sort(cands.begin(), cands.end(), cand_less);

    Search sr;
    sr.full = f.size() == 32 ? ~0u : (1u << f.size()) - 1;
    sr.by_elem.assign(f.size(), {});
    sr.cheapest.assign(f.size(), kBig);
    for (const auto& cd : cands)
        for (std::size_t j = 0; j < f.size(); ++j)
            if (cd.mask >> j & 1u) {
                sr.by_elem[j].push_back(&cd);
                sr.cheapest[j] = std::min(sr.cheapest[j], cd.cost);
            }
    const Cover g = content_greedy(s, f, prm);
    sr.best = g.total * (1 + 1e-9) + 1e-300;
    sr.dfs(0, 0.0);
    if (sr.best_cover.empty())
        return g;  // greedy was already optimal
    Cover out;
    for (const Cand* c : sr.best_cover) {
        out.balls.push_back({c->center, c->radius, c->cost});
        out.total += c->cost;
    }
    return out;
}

}  // namespace capkit
