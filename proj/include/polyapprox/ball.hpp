#pragma once

// Weighted geometry of the unit ball B^d. Quadrature against the weight
// W_mu(x) = (1 - |x|^2)^(mu - 1/2), weighted Lp norms, the trivial extension
// of a ball function to one more variable, the angular derivative of that
// extension in the (i, d+1) plane, and phi-scaled central differences with
// phi(x) = sqrt(1 - |x|^2). These are the raw materials for the ball moduli
// of smoothness and K-functionals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyapprox/fn.hpp"
#include "polyapprox/gauss.hpp"
#include "polyapprox/multipoly.hpp"
#include "polyapprox/sphere.hpp"

namespace polyapprox {

/// Integral of W_mu over B^d, by polar reduction to a Beta integral.
inline double ball_mass(int d, double mu) {
    if (d < 1) throw std::invalid_argument("ball_mass: dimension must be positive");
    if (!(mu > -0.5)) throw std::invalid_argument("ball_mass: weight not integrable");
    return 0.5 * sphere_area(d) * std::beta(0.5 * d, mu + 0.5);
}

struct BallWeight {
    double mu = 0.0;
    std::optional<int> m;  // lift dimension when mu = (m-1)/2 for integer m
    double a_mu = 0.0;     // reciprocal of the W_mu mass, so a_mu * integral(W_mu) = 1
};

inline BallWeight ball_weight(int d, double mu) {
    BallWeight w;
    w.mu = mu;
    const double m = 2.0 * mu + 1.0;
    if (std::abs(m - std::round(m)) < 1e-12 && std::round(m) >= 1.0)
        w.m = static_cast<int>(std::round(m));
    w.a_mu = 1.0 / ball_mass(d, mu);
    return w;
}

/// Quadrature on B^d with the weight W_mu folded into the weights.
struct BallRule {
    int dim = 0;
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness = 0;
    double mu = 0.0;
    double total_mass = 0.0;
};

/// Product rule: radial Gauss-Jacobi in u = r^2 against u^(d/2-1)(1-u)^(mu-1/2)
/// times a sphere rule of matching degree. Odd-degree monomials die on the
/// sphere factor, so exactness only needs the radial rule on even powers.
inline BallRule ball_rule(int d, double mu, int degree) {
    if (d < 1 || d > 3) throw std::invalid_argument("ball_rule: dim must be 1, 2, or 3");
    if (degree < 0 || degree > 96) throw std::invalid_argument("ball_rule: degree out of range");
    if (!(mu > -0.5)) throw std::invalid_argument("ball_rule: weight not integrable");
    BallRule rule;
    rule.dim = d;
    rule.mu = mu;
    if (d == 1) {
        auto g = gauss_rule(GaussKind::jacobi, degree / 2 + 1, mu - 0.5, mu - 0.5);
        rule.exactness = g.exactness;
        for (size_t k = 0; k < g.nodes.size(); ++k) {
            rule.points.push_back({g.nodes[k]});
            rule.weights.push_back(g.weights[k]);
        }
    } else {
        auto sph = sphere_rule(d, degree);
        const int nrad = (degree + 5) / 4;
        auto rad = gauss_rule_unit(GaussKind::jacobi, nrad, mu - 0.5, 0.5 * d - 1.0);
        rule.exactness = std::min(sph.exactness, 4 * nrad - 2);
        for (size_t j = 0; j < rad.nodes.size(); ++j) {
            const double r = std::sqrt(rad.nodes[j]);
            for (size_t a = 0; a < sph.points.size(); ++a) {
                Point x(d);
                for (int k = 0; k < d; ++k) x[k] = r * sph.points[a][k];
                rule.points.push_back(std::move(x));
                rule.weights.push_back(0.5 * rad.weights[j] * sph.weights[a]);
            }
        }
    }
    for (double w : rule.weights) rule.total_mass += w;
    return rule;
}

inline double integrate_ball(const FnHandle& f, const BallRule& rule) {
    double acc = 0.0;
    for (size_t k = 0; k < rule.points.size(); ++k) acc += rule.weights[k] * f(rule.points[k]);
    return acc;
}

inline double phi_eval(std::span<const double> x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    if (std::sqrt(n2) > 1.0 + 1e-12) throw std::invalid_argument("phi_eval: point outside the ball");
    return std::sqrt(std::max(0.0, 1.0 - n2));
}

namespace detail {

/// phi without the domain check, for stencil points that drift off the ball.
inline double phi_clamped(std::span<const double> x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return std::sqrt(std::max(0.0, 1.0 - n2));
}

/// Compass search inside the ball from a seed node; steps along coordinate
/// axes, pulled back to the boundary when they exit.
inline double refine_sup_ball(const FnHandle& f, Point x, double best, const SupRefine& ref) {
    const int d = static_cast<int>(x.size());
    double step = ref.step;
    for (int it = 0; it < ref.rounds && step > 1e-9; ++it) {
        bool improved = false;
        for (int axis = 0; axis < d; ++axis) {
            for (double sgn : {1.0, -1.0}) {
                Point y = x;
                y[axis] += sgn * step;
                double n = std::sqrt(dot(y, y));
                if (n > 1.0)
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

/// Weighted Lp norm (the weight lives in the rule); p = infinity is the
/// unweighted supremum over the nodes, optionally sharpened by compass search.
inline double lp_norm_ball(const FnHandle& f, double p, const BallRule& rule,
                           const SupRefine& refine = {}) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_ball: p must be >= 1");
    if (std::isinf(p)) {
        std::vector<double> vals(rule.points.size());
        double best = 0.0;
        for (size_t k = 0; k < rule.points.size(); ++k) {
            vals[k] = std::abs(f(rule.points[k]));
            best = std::max(best, vals[k]);
        }
        if (refine.enabled) {
            std::vector<size_t> idx(vals.size());
            for (size_t k = 0; k < idx.size(); ++k) idx[k] = k;
            std::partial_sort(idx.begin(), idx.begin() + std::min<size_t>(refine.seeds, idx.size()),
                              idx.end(), [&](size_t a, size_t b) { return vals[a] > vals[b]; });
            for (int s = 0; s < refine.seeds && s < static_cast<int>(idx.size()); ++s)
                best = std::max(best, detail::refine_sup_ball(f, rule.points[idx[s]], best, refine));
        }
        return best;
    }
    double acc = 0.0;
    for (size_t k = 0; k < rule.points.size(); ++k)
        acc += rule.weights[k] * std::pow(std::abs(f(rule.points[k])), p);
    return std::pow(acc, 1.0 / p);
}

/// The extension to one more variable that ignores it: ext(x, x_last) = f(x).
inline FnHandle extend_fn(const FnHandle& f) {
    if (f.is_poly())
        return FnHandle::from_poly(Domain::ball, f.poly->extended(f.dim + 1), f.name + ".ext");
    auto base = f;
    const int d = f.dim;
    return FnHandle::from_fn(Domain::ball, d + 1,
        [base, d](std::span<const double> y) { return base(y.first(d)); },
        f.name + ".ext");
}

inline MultiPoly one_minus_norm2(int d) {
    MultiPoly q = MultiPoly::constant(d, 1.0);
    for (int i = 0; i < d; ++i) {
        MultiPoly xi = MultiPoly::variable(d, i);
        q = q - xi * xi;
    }
    return q;
}

/// (-phi d_i)^r g split as a(x) + phi(x) b(x) with polynomial parts. One
/// application maps (a, b) to (x_i b - (1-|x|^2) d_i b, -d_i a), so even
/// orders are pure a and odd orders pure phi*b; squared integrands stay
/// polynomial either way, which keeps p = 2 norms quadrature-exact.
struct PhiPair {
    MultiPoly a;
    MultiPoly b;

    double eval_signed(std::span<const double> x, double signed_phi) const {
        return a.eval(x) + signed_phi * b.eval(x);
    }
    double eval(std::span<const double> x) const {
        return eval_signed(x, detail::phi_clamped(x));
    }
};

inline PhiPair phi_d_pow(const MultiPoly& g, int r, int i) {
    const int d = g.dim();
    if (i < 0 || i >= d) throw std::invalid_argument("phi_d_pow: index out of range");
    if (r < 0) throw std::invalid_argument("phi_d_pow: order must be >= 0");
    MultiPoly a = g;
    MultiPoly b = MultiPoly::constant(d, 0.0);
    const MultiPoly q = one_minus_norm2(d);
    const MultiPoly xi = MultiPoly::variable(d, i);
    for (int step = 0; step < r; ++step) {
        MultiPoly na = xi * b - q * b.partial(i);
        MultiPoly nb = a.partial(i).scaled(-1.0);
        a = std::move(na);
        b = std::move(nb);
    }
    return {std::move(a), std::move(b)};
}

namespace detail {

/// Nested central differences for (-phi d_i)^r applied to x -> f(s x).
/// Each level multiplies by -phi at the current point; a vanishing phi
/// truncates the branch since the factor kills it.
inline double neg_phi_pow_num(const FnHandle& f, double s, int r, int i, Point x, double h) {
    std::function<double(Point&, int)> rec = [&](Point& pt, int k) -> double {
        if (k == 0) {
            Point sp(pt.size());
            for (size_t q = 0; q < pt.size(); ++q) sp[q] = s * pt[q];
            return f(sp);
        }
        const double ph = phi_clamped(pt);
        if (ph == 0.0) return 0.0;
        pt[i] += h;
        const double up = rec(pt, k - 1);
        pt[i] -= 2.0 * h;
        const double dn = rec(pt, k - 1);
        pt[i] += h;
        return -ph * (up - dn) / (2.0 * h);
    };
    return rec(x, r);
}

/// Plain r-th partial along e_i by one central stencil of width r*h.
inline double partial_pow_num(const FnHandle& f, int r, int i, std::span<const double> x, double h) {
    if (r < 1) throw std::invalid_argument("partial_pow_num: order must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("partial_pow_num: step must be positive");
    double acc = 0.0, binom = 1.0;
    Point pt(x.begin(), x.end());
    const double base = pt[i];
    for (int k = 0; k <= r; ++k) {
        if (k > 0) binom = binom * (r - k + 1) / k;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        pt[i] = base + (0.5 * r - k) * h;
        acc += sgn * binom * f(pt);
    }
    return acc / std::pow(h, r);
}

}  // namespace detail

/// Angular derivative of order r of the extension of f in the (i, last)
/// plane, at a point y of the ball one dimension up. Writing y = s(x, phi(x))
/// with s = |y|, the value is (-phi d_i)^r applied to x -> f(s x); odd orders
/// are odd in the last coordinate and even orders even, which extends the
/// formula to negative last coordinate. Polynomial handles are exact, others
/// use nested central differences of step h.
inline double d_id1_tilde(const FnHandle& f, int r, int i, std::span<const double> y,
                          double h = 1e-3) {
    const int d = f.dim;
    if (static_cast<int>(y.size()) != d + 1)
        throw std::invalid_argument("d_id1_tilde: point must live one dimension up");
    if (i < 0 || i >= d) throw std::invalid_argument("d_id1_tilde: index out of range");
    if (r < 0 || r > 4) throw std::invalid_argument("d_id1_tilde: order must be in [0, 4]");
    double s2 = 0.0;
    for (double v : y) s2 += v * v;
    const double s = std::sqrt(s2);
    if (s > 1.0 + 1e-12) throw std::invalid_argument("d_id1_tilde: point outside the ball");
    if (s < 1e-13) {
        if (r > 0) return 0.0;  // boundary case: the formula's prefactors vanish
        Point z(d, 0.0);
        return f(z);
    }
    Point x(d);
    double xn2 = 0.0;
    for (int k = 0; k < d; ++k) {
        x[k] = y[k] / s;
        xn2 += x[k] * x[k];
    }
    if (xn2 > 1.0) {
        const double fix = 1.0 / std::sqrt(xn2);
        for (auto& xk : x) xk *= fix;
    }
    const double signed_phi = y[d] / s;
    if (f.is_poly()) {
        PhiPair pp = phi_d_pow(f.poly->dilated(s), r, i);
        return pp.eval_signed(x, signed_phi);
    }
    double v = detail::neg_phi_pow_num(f, s, r, i, x, h);
    if (signed_phi < 0.0 && r % 2 == 1) v = -v;
    return v;
}

/// Central difference of order r along e_i with step h scaled by phi(x);
/// zero by convention when the extreme stencil points leave the ball. At the
/// boundary all nodes coincide and the alternating sum cancels to zero.
inline double central_diff_phi(const FnHandle& f, int r, int i, double h,
                               std::span<const double> x) {
    if (r < 1) throw std::invalid_argument("central_diff_phi: order must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("central_diff_phi: step must be positive");
    const int d = static_cast<int>(x.size());
    if (i < 0 || i >= d) throw std::invalid_argument("central_diff_phi: index out of range");
    const double ph = phi_eval(x);
    const double half = 0.5 * r * h * ph;
    Point pt(x.begin(), x.end());
    const double base = pt[i];
    // the stencil is a segment along e_i, so the extreme points have the
    // largest norm
    for (double sgn : {1.0, -1.0}) {
        pt[i] = base + sgn * half;
        if (dot(pt, pt) > 1.0 + 1e-15) return 0.0;
    }
    double acc = 0.0, binom = 1.0;
    for (int k = 0; k <= r; ++k) {
        if (k > 0) binom = binom * (r - k + 1) / k;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        pt[i] = base + (0.5 * r - k) * h * ph;
        acc += sgn * binom * f(pt);
    }
    return acc;
}

/// Weighted norm of the extension derivative without leaving dimension d.
/// mu = 0: the norm of (phi d_i)^r f against the Chebyshev weight, matching
/// the surface norm of the extension derivative on the sphere one dimension
/// up after the two hemispheres are folded onto the ball. mu = 1/2: the norm
/// over the ball one dimension up, computed by layering dilations f(s x)
/// radially with a Gauss-Jacobi rule that absorbs the (1-s^2)^(-1/2) factor;
/// the layered integral covers a half ball, and parity doubles it.
inline double norm_did1(const FnHandle& f, int r, int i, double p, double mu, int degree,
                        const SupRefine& refine = {}, double h = 1e-3) {
    const int d = f.dim;
    if (i < 0 || i >= d) throw std::invalid_argument("norm_did1: index out of range");
    if (r < 0 || r > 4) throw std::invalid_argument("norm_did1: order must be in [0, 4]");
    if (!(p >= 1.0)) throw std::invalid_argument("norm_did1: p must be >= 1");
    int m = 0;
    if (std::abs(mu) < 1e-12)
        m = 1;
    else if (std::abs(mu - 0.5) < 1e-12)
        m = 2;
    else
        throw std::invalid_argument("norm_did1: mu must be 0 or 1/2");

    auto layer_value = [&](double s, std::span<const double> x) {
        if (f.is_poly()) return phi_d_pow(f.poly->dilated(s), r, i).eval(x);
        return detail::neg_phi_pow_num(f, s, r, i, Point(x.begin(), x.end()), h);
    };

    BallRule inner = ball_rule(d, 0.0, degree);
    if (m == 1) {
        if (std::isinf(p)) {
            FnHandle g = FnHandle::from_fn(Domain::ball, d,
                [layer_value](std::span<const double> x) { return layer_value(1.0, x); });
            return lp_norm_ball(g, p, inner, refine);
        }
        double acc = 0.0;
        for (size_t k = 0; k < inner.points.size(); ++k)
            acc += inner.weights[k] * std::pow(std::abs(layer_value(1.0, inner.points[k])), p);
        return std::pow(acc, 1.0 / p);
    }

    auto rad = gauss_rule_unit(GaussKind::jacobi, degree / 2 + 1, -0.5, 0.5 * (d - 1));
    if (std::isinf(p)) {
        double best = 0.0;
        std::vector<double> svals(rad.nodes.size());
        for (size_t j = 0; j < rad.nodes.size(); ++j) svals[j] = std::sqrt(rad.nodes[j]);
        svals.push_back(1.0);
        for (double s : svals) {
            FnHandle g = FnHandle::from_fn(Domain::ball, d,
                [layer_value, s](std::span<const double> x) { return layer_value(s, x); });
            best = std::max(best, lp_norm_ball(g, p, inner, refine));
        }
        return best;
    }
    double acc = 0.0;
    for (size_t j = 0; j < rad.nodes.size(); ++j) {
        const double s = std::sqrt(rad.nodes[j]);
        double layer = 0.0;
        for (size_t k = 0; k < inner.points.size(); ++k)
            layer += inner.weights[k] * std::pow(std::abs(layer_value(s, inner.points[k])), p);
        acc += 0.5 * rad.weights[j] * layer;
    }
    return std::pow(2.0 * acc, 1.0 / p);
}

}  // namespace polyapprox
