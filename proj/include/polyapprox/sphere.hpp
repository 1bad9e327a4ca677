#pragma once

// Points, plane rotations, product quadrature, Lp norms, rotation
// differences, and numeric angular derivatives on the unit sphere S^{d-1}
// for ambient dimension d in {2, 3, 4}. Axis indices are 0-based.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyapprox/fn.hpp"
#include "polyapprox/gauss.hpp"

namespace polyapprox {

using Point = std::vector<double>;

inline bool is_unit(std::span<const double> x, double tol = 1e-12) {
    double n = 0.0;
    for (double v : x) n += v * v;
    return std::abs(n - 1.0) <= 3.0 * tol;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Rotation in the (i, j) coordinate plane moving e_i toward e_j:
/// y_i = x_i cos t - x_j sin t, y_j = x_i sin t + x_j cos t.
struct PlaneRotation {
    int i = 0;
    int j = 1;
    double theta = 0.0;
};

inline Point rotate(const PlaneRotation& q, std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    if (q.i < 0 || q.j < 0 || q.i >= d || q.j >= d || q.i == q.j)
        throw std::invalid_argument("rotate: bad axis pair");
    Point y(x.begin(), x.end());
    const double c = std::cos(q.theta), s = std::sin(q.theta);
    y[q.i] = x[q.i] * c - x[q.j] * s;
    y[q.j] = x[q.i] * s + x[q.j] * c;
    return y;
}

/// Surface quadrature with positive weights summing to the sphere area.
struct SphereRule {
    int dim = 0;  // ambient dimension
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness = 0;
    double total_mass = 0.0;
};

/// Area of S^{d-1}.
inline double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

inline SphereRule sphere_rule(int d, int degree) {
    if (d < 2 || d > 4) throw std::invalid_argument("sphere_rule: dim must be 2, 3, or 4");
    if (degree < 0 || degree > 128) throw std::invalid_argument("sphere_rule: degree out of range");
    SphereRule rule;
    rule.dim = d;
    const double two_pi = 2.0 * std::numbers::pi;
    if (d == 2) {
        const int n = std::max(degree + 1, 3);
        rule.exactness = n - 1;
        for (int k = 0; k < n; ++k) {
            const double a = two_pi * k / n;
            rule.points.push_back({std::cos(a), std::sin(a)});
            rule.weights.push_back(two_pi / n);
        }
    } else if (d == 3) {
        const int nz = (degree + 2) / 2;
        const int nphi = std::max(degree + 1, 3);
        auto gz = gauss_rule(GaussKind::legendre, nz);
        rule.exactness = std::min(2 * nz - 1, nphi - 1);
        for (int a = 0; a < nz; ++a) {
            const double z = gz.nodes[a];
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int b = 0; b < nphi; ++b) {
                const double phi = two_pi * b / nphi;
                rule.points.push_back({r * std::cos(phi), r * std::sin(phi), z});
                rule.weights.push_back(gz.weights[a] * two_pi / nphi);
            }
        }
    } else {
        const int n1 = (degree + 2) / 2;
        const int n2 = (degree + 2) / 2;
        const int n3 = std::max(degree + 1, 3);
        auto g1 = gauss_rule(GaussKind::jacobi, n1, 0.5, 0.5);
        auto g2 = gauss_rule(GaussKind::legendre, n2);
        rule.exactness = std::min({2 * n1 - 1, 2 * n2 - 1, n3 - 1});
        for (int a = 0; a < n1; ++a) {
            const double t1 = g1.nodes[a];
            const double s1 = std::sqrt(std::max(0.0, 1.0 - t1 * t1));
            for (int b = 0; b < n2; ++b) {
                const double t2 = g2.nodes[b];
                const double s2 = std::sqrt(std::max(0.0, 1.0 - t2 * t2));
                for (int c = 0; c < n3; ++c) {
                    const double phi = two_pi * c / n3;
                    rule.points.push_back({t1, s1 * t2, s1 * s2 * std::cos(phi), s1 * s2 * std::sin(phi)});
                    rule.weights.push_back(g1.weights[a] * g2.weights[b] * two_pi / n3);
                }
            }
        }
    }
    for (double w : rule.weights) rule.total_mass += w;
    return rule;
}

inline double integrate_sphere(const FnHandle& f, const SphereRule& rule) {
    double acc = 0.0;
    for (size_t k = 0; k < rule.points.size(); ++k) acc += rule.weights[k] * f(rule.points[k]);
    return acc;
}

/// Local search settings for sup-norm estimates. The grid supremum over
/// quadrature nodes is a lower bound; a compass search around the best nodes
/// tightens it for functions with narrow peaks.
struct SupRefine {
    bool enabled = false;
    int seeds = 3;       // how many top nodes to refine from
    int rounds = 60;     // compass iterations per seed
    double step = 0.25;  // initial tangent step
};

namespace detail {

inline std::vector<Point> tangent_basis(std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    std::vector<Point> basis;
    for (int axis = 0; axis < d && static_cast<int>(basis.size()) < d - 1; ++axis) {
        Point v(d, 0.0);
        v[axis] = 1.0;
        double c = dot(v, x);
        for (int k = 0; k < d; ++k) v[k] -= c * x[k];
        for (const auto& b : basis) {
            double cb = dot(v, b);
            for (int k = 0; k < d; ++k) v[k] -= cb * b[k];
        }
        double n = std::sqrt(dot(v, v));
        if (n > 1e-8) {
            for (auto& vk : v) vk /= n;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

inline double refine_sup_sphere(const FnHandle& f, Point x, double best, const SupRefine& ref) {
    double step = ref.step;
    for (int it = 0; it < ref.rounds && step > 1e-9; ++it) {
        auto basis = tangent_basis(x);
        bool improved = false;
        for (const auto& t : basis) {
            for (double sgn : {1.0, -1.0}) {
                Point y(x.size());
                double n = 0.0;
                for (size_t k = 0; k < x.size(); ++k) {
                    y[k] = x[k] + sgn * step * t[k];
                    n += y[k] * y[k];
                }
                n = std::sqrt(n);
                for (auto& yk : y) yk /= n;
                double v = std::abs(f(y));
                if (v > best) {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace detail

/// Lp norm over the sphere measured by the rule; p = infinity is the node
/// supremum, optionally sharpened by compass refinement.
inline double lp_norm_sphere(const FnHandle& f, double p, const SphereRule& rule,
                             const SupRefine& refine = {}) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_sphere: p must be >= 1");
    if (std::isinf(p)) {
        std::vector<size_t> top;
        std::vector<double> vals(rule.points.size());
        double best = 0.0;
        for (size_t k = 0; k < rule.points.size(); ++k) {
            vals[k] = std::abs(f(rule.points[k]));
            best = std::max(best, vals[k]);
        }
        if (refine.enabled) {
            // refine from the strongest few nodes
            std::vector<size_t> idx(vals.size());
            for (size_t k = 0; k < idx.size(); ++k) idx[k] = k;
            std::partial_sort(idx.begin(), idx.begin() + std::min<size_t>(refine.seeds, idx.size()),
                              idx.end(), [&](size_t a, size_t b) { return vals[a] > vals[b]; });
            for (int s = 0; s < refine.seeds && s < static_cast<int>(idx.size()); ++s)
                best = std::max(best, detail::refine_sup_sphere(f, rule.points[idx[s]], best, refine));
        }
        return best;
    }
    double acc = 0.0;
    for (size_t k = 0; k < rule.points.size(); ++k)
        acc += rule.weights[k] * std::pow(std::abs(f(rule.points[k])), p);
    return std::pow(acc, 1.0 / p);
}

/// Iterated rotation difference sum_k (-1)^k binom(r,k) f(Q_{i,j,k theta} x).
/// Up to the sign (-1)^r this is the one-variable forward difference of
/// t -> f(Q_{i,j,t} x) at 0 with step theta.
inline double forward_diff(const FnHandle& f, int r, int i, int j, double theta,
                           std::span<const double> x) {
    if (r < 1) throw std::invalid_argument("forward_diff: order must be >= 1");
    double acc = 0.0, binom = 1.0;
    for (int k = 0; k <= r; ++k) {
        if (k > 0) binom = binom * (r - k + 1) / k;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        if (k == 0) {
            acc += f(x);
        } else {
            acc += sgn * binom * f(rotate({i, j, k * theta}, x));
        }
    }
    return acc;
}

/// Numeric angular derivative D_{i,j}^r f(x), the r-th derivative of
/// t -> f(Q_{i,j,-t} x) at t = 0 by central differences, O(h^2).
inline double dij_num(const FnHandle& f, int r, int i, int j, std::span<const double> x, double h) {
    if (r < 1) throw std::invalid_argument("dij_num: order must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("dij_num: step must be positive");
    double acc = 0.0, binom = 1.0;
    for (int k = 0; k <= r; ++k) {
        if (k > 0) binom = binom * (r - k + 1) / k;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double t = -(r / 2.0 - k) * h;  // evaluate f(Q_{-s} x) at s = (r/2 - k) h
        acc += sgn * binom * f(rotate({i, j, t}, x));
    }
    return acc / std::pow(h, r);
}

/// Tangential gradient component: the j-th partial of the 0-homogeneous
/// extension on the sphere, assembled as -sum_{i != j} x_i D_{i,j} f.
inline double tangential_partial(const FnHandle& f, int j, std::span<const double> x, double h) {
    const int d = static_cast<int>(x.size());
    if (j < 0 || j >= d) throw std::invalid_argument("tangential_partial: index out of range");
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        if (i == j || x[i] == 0.0) continue;
        acc -= x[i] * dij_num(f, 1, i, j, x, h);
    }
    return acc;
}

}  // namespace polyapprox
