#pragma once

#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "capkit/space.hpp"

namespace capkit {

using PointFunction = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conjugate exponent, with 1 <-> inf.
double conjugate(double p);

// f_n(x) for n in [n0, n_max] plus one collapsed tail value per point.
struct ScaleSequence {
    ScaleWindow window;
    std::size_t npts = 0;
    std::vector<double> head;
    std::vector<double> tail;

    ScaleSequence() = default;
    ScaleSequence(const ScaleWindow& w, std::size_t n)
        : window(w), npts(n), head(static_cast<std::size_t>(w.count()) * n, 0.0), tail(n, 0.0) {}
    double& at(int n, int x) { return head[static_cast<std::size_t>(n - window.n0) * npts + x]; }
    double at(int n, int x) const { return head[static_cast<std::size_t>(n - window.n0) * npts + x]; }
};

// g_k(x), stored only for scales that are present.
struct GradientSequence {
    std::map<int, std::vector<double>> g;

    double at(int k, int x) const {
        auto it = g.find(k);
        return it == g.end() ? 0.0 : it->second[x];
    }
};

// Dense weights per point; support = nonzero entries.
using PointMeasure = std::vector<double>;

double mixed_norm(const Space& s, const ScaleSequence& f, const PointSet& domain, double p, double q);
double mixed_norm(const Space& s, const GradientSequence& g, const PointSet& domain, double p, double q);
// l^q norm of a nonnegative vector, q in [1, inf].
double lq_norm(const std::vector<double>& v, double q);

PointFunction max_noncentered(const Space& s, const PointFunction& f);
PointFunction frac_max(const Space& s, const PointMeasure& nu, double beta);

// (sum over n >= tail_start of 2^{-beta n q'})^{1/q'}; q' = inf gives the sup.
double tail_weight(const ScaleWindow& w, double beta, double q_dual);

// Head sum; the tail slot enters as tail(x) * tail_coeff.
PointFunction potential_H(const Space& s, const ScaleSequence& f, double beta, double tail_coeff = 0.0);

struct PartitionOfUnity {
    int n = 0;
    std::vector<int> centers;
    // nonzero values of psi_i as (point, value), ascending point order
    std::vector<std::vector<std::pair<int, double>>> psi;
    double value(std::size_t i, int x) const;
    double kappa = 1;
    double L_pou = 0;
    double N_overlap = 0;
};

PartitionOfUnity partition_of_unity(const Space& s, int n);
std::vector<PartitionOfUnity> partitions_for_window(const Space& s, const ScaleWindow& w);

PointFunction potential_L(const Space& s, const ScaleSequence& f, double beta);
PointFunction potential_L(const Space& s, const ScaleSequence& f, double beta,
                          const std::vector<PartitionOfUnity>& parts);

PointFunction riesz_I(const Space& s, const PointMeasure& nu, double beta);
PointFunction riesz_I_density(const Space& s, const PointFunction& f, double beta);

struct HdualValues {
    ScaleWindow window;
    std::size_t npts = 0;
    std::vector<double> head;  // (n - n0) * npts + x
    // tail contribution per point: sum of q'-th powers for finite q', sup for q' = inf
    std::vector<double> tail;
    double q_dual = 1;

    double at(int n, int x) const { return head[static_cast<std::size_t>(n - window.n0) * npts + x]; }
    double point_norm(int x) const;
};

HdualValues hdual_sequence(const Space& s, const PointMeasure& nu, double beta, double q_dual);
HdualValues hdual_sequence(const Space& s, const ScaleWindow& w, const PointMeasure& nu, double beta, double q_dual);
// ||H-check nu||_{L^p(l^q)} over all of X
double hdual_norm(const Space& s, const HdualValues& h, double p);

using PairBuckets = std::map<int, std::vector<std::pair<int, int>>>;
PairBuckets hajlasz_pair_buckets(const Space& s, const PointSet& omega);

struct GradientCheck {
    bool ok = true;
    int x = -1, y = -1;
    double excess = 0;
};

GradientCheck is_fractional_gradient(const Space& s, const PointFunction& u, const GradientSequence& g,
                                     const PointSet& omega, double beta, double tol = 1e-12);

double lipschitz_constant(const Space& s, const PointFunction& eta);

GradientSequence leibniz_gradient(const Space& s, const PointFunction& u, const GradientSequence& g,
                                  const PointFunction& eta, double eta_lip, double eta_sup, double beta);

// Valid gradient of u over omega: g_k(x) = half the max difference quotient over bucket-k partners.
GradientSequence pointwise_gradient(const Space& s, const PointFunction& u, const PointSet& omega, double beta);

// sup over n >= n0 (tail included) of 2^{-beta n} nu(B(x,2^-n)) / mu(B(x,2^-n))
PointFunction dyadic_frac_max(const Space& s, const PointMeasure& nu, double beta);

PointSet all_points(const Space& s);

}  // namespace capkit
