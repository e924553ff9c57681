#ifndef INVPERS_METRIC_SPACE_HPP
#define INVPERS_METRIC_SPACE_HPP

#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "invpers/common.hpp"

namespace invpers {

/// A finite metric space: labelled points with a full distance matrix,
/// optionally backed by coordinate vectors.  Immutable after construction;
/// every operation on it is a pure function.
struct FiniteMetricSpace {
    std::vector<std::string> point_ids;
    std::vector<double> dist;                 // row-major n*n
    std::vector<std::vector<double>> coords;  // empty when the space is matrix-given
    bool ultrametric = false;

    int size() const { return static_cast<int>(point_ids.size()); }

    double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * point_ids.size() + j]; }

    /// Largest pairwise distance (0 for a single point).
    double diameter() const {
        double m = 0;
        for (int i = 0; i < size(); ++i)
            for (int j = i + 1; j < size(); ++j) m = std::max(m, d(i, j));
        return m;
    }

    /// Smallest positive pairwise distance; +inf for a single point.
    double min_positive_distance() const {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < size(); ++i)
            for (int j = i + 1; j < size(); ++j)
                if (d(i, j) > 0) m = std::min(m, d(i, j));
        return m;
    }
};

struct MetricViolation {
    enum class Kind { not_square, asymmetric, nonzero_diagonal, nonpositive, triangle, strong_triangle };
    Kind kind;
    int i = -1, j = -1, k = -1;
    double amount = 0;
};

struct MetricReport {
    bool ok = false;           // symmetry, zero diagonal, positivity, triangle inequality
    bool ultrametric = false;  // strong triangle inequality also holds
    std::vector<MetricViolation> violations;
};

/// Checks a candidate distance matrix against the metric axioms within
/// tol_metric.  Strong-triangle violations are recorded but do not affect
/// `ok`; `ultrametric` is set when none exist.
inline MetricReport validate_metric(const std::vector<std::vector<double>>& m, double tol_metric = 1e-9) {
    MetricReport rep;
    const int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(m[i].size()) != n)
            throw Error(Error::Kind::argument, "validate_metric: matrix is not square");
    for (int i = 0; i < n; ++i) {
        if (std::abs(m[i][i]) > tol_metric)
            rep.violations.push_back({MetricViolation::Kind::nonzero_diagonal, i, i, -1, m[i][i]});
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(m[i][j] - m[j][i]) > tol_metric)
                rep.violations.push_back({MetricViolation::Kind::asymmetric, i, j, -1, m[i][j] - m[j][i]});
            if (m[i][j] <= tol_metric)
                rep.violations.push_back({MetricViolation::Kind::nonpositive, i, j, -1, m[i][j]});
        }
    }
    bool strong_ok = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                double slack = m[i][j] - (m[i][k] + m[k][j]);
                if (slack > tol_metric)
                    rep.violations.push_back({MetricViolation::Kind::triangle, i, j, k, slack});
                double strong = m[i][j] - std::max(m[i][k], m[k][j]);
                if (strong > tol_metric) {
                    strong_ok = false;
                    rep.violations.push_back({MetricViolation::Kind::strong_triangle, i, j, k, strong});
                }
            }
    rep.ok = std::none_of(rep.violations.begin(), rep.violations.end(), [](const MetricViolation& v) {
        return v.kind != MetricViolation::Kind::strong_triangle;
    });
    rep.ultrametric = rep.ok && strong_ok;
    return rep;
}

inline FiniteMetricSpace space_from_matrix(std::vector<std::vector<double>> m,
                                           std::vector<std::string> ids = {},
                                           double tol_metric = 1e-9) {
    MetricReport rep = validate_metric(m, tol_metric);
    if (!rep.ok) throw Error(Error::Kind::validation, "space_from_matrix: matrix violates the metric axioms");
    FiniteMetricSpace s;
    const int n = static_cast<int>(m.size());
    if (ids.empty())
        for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    s.point_ids = std::move(ids);
    s.dist.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.dist[static_cast<std::size_t>(i) * n + j] = m[i][j];
    s.ultrametric = rep.ultrametric;
    return s;
}

inline FiniteMetricSpace space_from_points(std::vector<std::vector<double>> pts,
                                           std::vector<std::string> ids = {}) {
    const int n = static_cast<int>(pts.size());
    if (n == 0) throw Error(Error::Kind::argument, "space_from_points: empty point list");
    if (n > 32768)
        throw Error(Error::Kind::resource,
                    "space_from_points: " + std::to_string(n) +
                        " points need a dense distance matrix beyond the supported scale");
    const std::size_t dim = pts[0].size();
    for (const auto& p : pts)
        if (p.size() != dim) throw Error(Error::Kind::argument, "space_from_points: ragged coordinates");
    FiniteMetricSpace s;
    if (ids.empty()) {
        for (int i = 0; i < n; ++i) {
            std::ostringstream os;
            os << "(";
            for (std::size_t c = 0; c < dim; ++c) os << (c ? "," : "") << pts[static_cast<std::size_t>(i)][c];
            os << ")";
            ids.push_back(os.str());
        }
    }
    s.point_ids = std::move(ids);
    s.dist.resize(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double acc = 0;
            for (std::size_t c = 0; c < dim; ++c) {
                double t = pts[i][c] - pts[j][c];
                acc += t * t;
            }
            double dij = std::sqrt(acc);
            if (dij == 0.0)
                throw Error(Error::Kind::validation,
                            "space_from_points: duplicate points " + s.point_ids[static_cast<std::size_t>(i)] +
                                " and " + s.point_ids[static_cast<std::size_t>(j)]);
            s.dist[static_cast<std::size_t>(i) * n + j] = dij;
            s.dist[static_cast<std::size_t>(j) * n + i] = dij;
        }
    s.coords = std::move(pts);
    return s;
}

/// A non-empty subset of a particular space, kept sorted.
struct Subset {
    const FiniteMetricSpace* space = nullptr;
    IndexSet members;
};

inline Subset make_subset(const FiniteMetricSpace& space, IndexSet members) {
    members = sorted_unique(std::move(members));
    if (members.empty()) throw Error(Error::Kind::argument, "subset must be non-empty");
    if (members.front() < 0 || members.back() >= space.size())
        throw Error(Error::Kind::argument, "subset contains out-of-range point indices");
    return Subset{&space, std::move(members)};
}

inline double diameter_of(const FiniteMetricSpace& s, const IndexSet& c) {
    double m = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) m = std::max(m, s.d(c[i], c[j]));
    return m;
}

/// d(x, C) = min over members.
inline double dist_to_set(const FiniteMetricSpace& s, int x, const IndexSet& c) {
    double m = std::numeric_limits<double>::infinity();
    for (int a : c) m = std::min(m, s.d(x, a));
    return m;
}

inline double hausdorff_distance(const FiniteMetricSpace& s, const IndexSet& c, const IndexSet& d) {
    double m = 0;
    for (int x : c) m = std::max(m, dist_to_set(s, x, d));
    for (int y : d) m = std::max(m, dist_to_set(s, y, c));
    return m;
}

/// Hausdorff distance between finite subsets,
/// max( max_{c in C} d(c,D), max_{d in D} d(d,C) ).
inline double hausdorff_distance(const Subset& c, const Subset& d) {
    if (c.space != d.space)
        throw Error(Error::Kind::argument, "hausdorff_distance: subsets live in different spaces");
    return hausdorff_distance(*c.space, c.members, d.members);
}

}  // namespace invpers

#endif
