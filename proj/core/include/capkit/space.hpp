#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capkit {

// Sorted list of point indices.
using PointSet = std::vector<int>;

constexpr std::size_t kMaxPoints = std::size_t{1} << 13;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite metric measure space. Immutable once built.
class Space {
public:
    Space() = default;
    // dist is n*n row-major. No validation here, see validate_metric.
    Space(std::vector<std::string> ids, std::vector<double> mass, std::vector<double> dist,
          std::vector<std::vector<double>> coords = {});

    std::size_t size() const { return ids_.size(); }
    double d(int i, int j) const { return dist_[static_cast<std::size_t>(i) * size() + j]; }
    double mass(int i) const { return mass_[i]; }
    const std::vector<double>& masses() const { return mass_; }
    const std::vector<double>& dist_table() const { return dist_; }
    const std::string& id(int i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }
    int index_of(const std::string& id) const;

    double diam() const { return diam_; }
    double min_dist() const { return min_dist_; }
    double total_mass() const { return total_mass_; }

    // Points ordered by distance from i (ties by index), with distances and
    // cumulative masses along that order.
    const std::vector<int>& order(int i) const { return order_[i]; }
    const std::vector<double>& sorted_dist(int i) const { return sdist_[i]; }
    const std::vector<double>& cum_mass(int i) const { return cmass_[i]; }

    // Number of points y with d(i,y) < r (or <= r when closed).
    std::size_t ball_count(int i, double r, bool closed = false) const;
    double ball_mass(int i, double r, bool closed = false) const;

private:
    std::vector<std::string> ids_;
    std::vector<double> mass_;
    std::vector<double> dist_;
    std::vector<std::vector<double>> coords_;
    std::vector<std::vector<int>> order_;
    std::vector<std::vector<double>> sdist_;
    std::vector<std::vector<double>> cmass_;
    double diam_ = 0, min_dist_ = 0, total_mass_ = 0;
};

struct ValidationReport {
    bool ok = true;
    std::string axiom;       // "symmetry", "identity", "triangle", "mass", "size"
    std::vector<int> witness;
    std::string message;
};

// The O(n^3) triangle scan can be skipped for spaces built from coordinates.
ValidationReport validate_metric(const Space& s, double sym_tol = 1e-12, bool check_triangle = true);

struct ScaleWindow {
    int n0 = 0;
    int n_max = 0;
    int tail_start = 1;
    int count() const { return n_max - n0 + 1; }
};

// extra_head moves the tail further out; only used to test tail collapse.
ScaleWindow scale_window(const Space& s, int extra_head = 0);

// Integer k with 2^{-k-1} <= d < 2^{-k}.
int bucket_of(double d);

PointSet ball(const Space& s, int center, double r, bool closed = false);
double ball_measure(const Space& s, int center, double r, bool closed = false);
double set_measure(const Space& s, const PointSet& e);

struct SpaceStats {
    double c_mu = 1;
    std::optional<double> c_R;
    double sigma = 0;
    double c_sigma = 1;
    bool sigma_degenerate = false;
    // partition-of-unity constants, maxima over the scale window
    double kappa = 0;
    double L_pou = 0;
    double N_overlap = 0;
};

// Exact doubling constant: sup over all r > 0, evaluated at the breakpoints
// d and d/2 of the step functions r -> mu(B(x,r)), mu(B(x,2r)).
double doubling_constant(const Space& s);
SpaceStats estimate_stats(const Space& s);

// Distances from coordinates (Euclidean norm).
Space euclidean_space(std::vector<std::string> ids, std::vector<double> mass, std::vector<std::vector<double>> coords);

Space build_grid(int dim, int levels);
// Equally spaced points on a line with given spacing, first point at origin.
Space build_line(int count, double spacing, double mass_each);

struct CantorSpace {
    Space space;
    PointSet set;
};
CantorSpace build_cantor(double ratio, int depth);

Space two_point_space();
Space three_chain();

}  // namespace capkit
