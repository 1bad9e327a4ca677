#pragma once

// Approximation machinery on S^{d-1}: zonal kernels, degree projections,
// the filtered near-best operator V_n, best L2 errors by Parseval,
// moduli of smoothness, K-functional upper bounds, and smoothness norms.
// All kernel integrals carry 1/omega_{d-1} so proj_0 f = mean(f) and V_n 1 = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyapprox/fn.hpp"
#include "polyapprox/gegenbauer.hpp"
#include "polyapprox/multipoly.hpp"
#include "polyapprox/sphere.hpp"

namespace polyapprox {

/// Z_{n,d}(t), the zonal kernel of degree n in ambient dimension d.
inline double zonal_eval(int n, int d, double t) {
    if (d < 2) throw std::invalid_argument("zonal_eval: dim must be >= 2");
    if (std::abs(t) > 1.0 + 1e-12) throw std::invalid_argument("zonal_eval: |t| > 1");
    std::vector<double> z(n + 1);
    zonal_all(n, (d - 2) / 2.0, t, z);
    return z[n];
}

/// Coefficients of Z_{k} as a one-variable polynomial in t (index = power).
inline std::vector<double> zonal_coeffs(int k, double lambda) {
    if (k < 0) throw std::invalid_argument("zonal_coeffs: negative degree");
    auto shift_mul_t = [](const std::vector<double>& c) {
        std::vector<double> out(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i) out[i + 1] = c[i];
        return out;
    };
    if (lambda == 0.0) {
        // Chebyshev limit: Z_0 = 1, Z_k = 2 T_k
        std::vector<double> tm1 = {1.0};  // T_0
        if (k == 0) return tm1;
        std::vector<double> t0 = {0.0, 1.0};  // T_1
        for (int m = 2; m <= k; ++m) {
            auto t1 = shift_mul_t(t0);
            for (auto& c : t1) c *= 2.0;
            for (size_t i = 0; i < tm1.size(); ++i) t1[i] -= tm1[i];
            tm1 = std::move(t0);
            t0 = std::move(t1);
        }
        for (auto& c : t0) c *= 2.0;
        return t0;
    }
    std::vector<double> cm1 = {1.0};  // C_0
    if (k > 0) {
        std::vector<double> c0 = {0.0, 2.0 * lambda};  // C_1
        for (int m = 2; m <= k; ++m) {
            auto c1 = shift_mul_t(c0);
            for (auto& c : c1) c *= 2.0 * (m + lambda - 1.0) / m;
            for (size_t i = 0; i < cm1.size(); ++i) c1[i] -= (m + 2.0 * lambda - 2.0) / m * cm1[i];
            cm1 = std::move(c0);
            c0 = std::move(c1);
        }
        cm1 = std::move(c0);
    }
    for (auto& c : cm1) c *= (k + lambda) / lambda;
    return cm1;
}

/// Parameters of the filtered kernel K_n = sum eta(k/n) Z_k.
struct ZonalSpec {
    int n = 1;
    int d = 3;
    CutoffEta eta{};
    double lambda() const { return (d - 2) / 2.0; }
};

/// Degree-k component of f by quadrature against the zonal kernel.
inline FnHandle project_degree(const FnHandle& f, int k, const SphereRule& rule) {
    if (f.domain != Domain::sphere || f.dim != rule.dim)
        throw std::invalid_argument("project_degree: handle/rule mismatch");
    const double lambda = (rule.dim - 2) / 2.0;
    const double inv_area = 1.0 / sphere_area(rule.dim);
    auto vals = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t a = 0; a < rule.points.size(); ++a) (*vals)[a] = f(rule.points[a]);
    auto pts = std::make_shared<std::vector<Point>>(rule.points);
    auto wts = std::make_shared<std::vector<double>>(rule.weights);
    return FnHandle::from_fn(Domain::sphere, rule.dim,
        [=](std::span<const double> x) {
            double acc = 0.0;
            std::vector<double> z(k + 1);
            for (size_t a = 0; a < pts->size(); ++a) {
                double t = std::clamp(dot(x, (*pts)[a]), -1.0, 1.0);
                zonal_all(k, lambda, t, z);
                acc += (*wts)[a] * (*vals)[a] * z[k];
            }
            return acc * inv_area;
        },
        f.name + ".proj" + std::to_string(k));
}

/// Degree-k component of a polynomial, exact when the rule's exactness
/// covers deg(p)+k. Assembled per node by Horner in the linear form <x,y>.
inline MultiPoly project_degree_poly(const MultiPoly& p, int k, const SphereRule& rule) {
    if (p.dim() != rule.dim) throw std::invalid_argument("project_degree_poly: dim mismatch");
    const int d = rule.dim;
    const auto zc = zonal_coeffs(k, (d - 2) / 2.0);
    const double inv_area = 1.0 / sphere_area(d);
    MultiPoly acc = MultiPoly::constant(d, 0.0);
    for (size_t a = 0; a < rule.points.size(); ++a) {
        const double fw = rule.weights[a] * poly_eval(p, rule.points[a]) * inv_area;
        if (fw == 0.0) continue;
        MultiPoly lin = MultiPoly::constant(d, 0.0);
        for (int i = 0; i < d; ++i) {
            Exponents e(d, 0);
            e[i] = 1;
            lin.add_term(e, rule.points[a][i]);
        }
        MultiPoly q = MultiPoly::constant(d, zc[k]);
        for (int m = k - 1; m >= 0; --m) {
            q = q * lin;
            if (zc[m] != 0.0) q.add_term(Exponents(d, 0), zc[m]);
        }
        acc = acc + q.scaled(fw);
    }
    return acc;
}

/// Per-degree squared L2 norms of the harmonic components of f, computed
/// pairwise over the rule so no component function is ever materialized.
struct HarmonicExpansion {
    int dim = 0;
    int max_degree = 0;
    std::vector<double> proj_norm_sq;  // index k = 0..max_degree
    double f_norm_sq = 0.0;
    /// unexplained mass beyond max_degree (the Parseval tail)
    double tail() const {
        double s = 0.0;
        for (double v : proj_norm_sq) s += v;
        return f_norm_sq - s;
    }
};

inline HarmonicExpansion harmonic_expansion(const FnHandle& f, int max_degree, const SphereRule& rule) {
    if (f.domain != Domain::sphere || f.dim != rule.dim)
        throw std::invalid_argument("harmonic_expansion: handle/rule mismatch");
    const double lambda = (rule.dim - 2) / 2.0;
    const double inv_area = 1.0 / sphere_area(rule.dim);
    const size_t N = rule.points.size();
    std::vector<double> vals(N);
    HarmonicExpansion ex;
    ex.dim = rule.dim;
    ex.max_degree = max_degree;
    ex.proj_norm_sq.assign(max_degree + 1, 0.0);
    for (size_t a = 0; a < N; ++a) {
        vals[a] = f(rule.points[a]);
        ex.f_norm_sq += rule.weights[a] * vals[a] * vals[a];
    }
    // ||proj_k f||^2 = (1/omega) sum_{a,b} w_a w_b f_a f_b Z_k(<x_a,x_b>)
    std::vector<double> z(max_degree + 1);
    for (size_t a = 0; a < N; ++a) {
        for (size_t b = a; b < N; ++b) {
            const double coef = (a == b ? 1.0 : 2.0) * rule.weights[a] * rule.weights[b] * vals[a] * vals[b];
            if (coef == 0.0) continue;
            double t = std::clamp(dot(rule.points[a], rule.points[b]), -1.0, 1.0);
            zonal_all(max_degree, lambda, t, z);
            for (int k = 0; k <= max_degree; ++k) ex.proj_norm_sq[k] += coef * z[k];
        }
    }
    for (auto& v : ex.proj_norm_sq) v *= inv_area;
    return ex;
}

/// E_n(f)_2 = inf over Pi_{n-1} of the L2 distance, via the Parseval tail.
inline double best_l2_error(const HarmonicExpansion& ex, int n) {
    double head = 0.0;
    for (int k = 0; k < n && k <= ex.max_degree; ++k) head += ex.proj_norm_sq[k];
    double rad = ex.f_norm_sq - head;
    if (rad < -1e-8 * std::max(1.0, ex.f_norm_sq))
        throw std::runtime_error("best_l2_error: projection mass exceeds the function norm");
    return std::sqrt(std::max(0.0, rad));
}

inline double best_l2_error(const FnHandle& f, int n, const SphereRule& rule, int max_degree) {
    if (max_degree < n) throw std::invalid_argument("best_l2_error: max_degree < n");
    return best_l2_error(harmonic_expansion(f, max_degree, rule), n);
}

/// V_n p for a polynomial, exactly: the filtered sum of degree projections.
inline MultiPoly vn_apply_poly(const MultiPoly& p, const ZonalSpec& spec, const SphereRule& rule) {
    const int kmax = std::min(2 * spec.n, p.degree());
    MultiPoly out = MultiPoly::constant(p.dim(), 0.0);
    for (int k = 0; k <= kmax; ++k) {
        const double s = eta_eval(spec.eta, static_cast<double>(k) / spec.n);
        if (s == 0.0) continue;
        out = out + project_degree_poly(p, k, rule).scaled(s);
    }
    return out;
}

/// V_n f by quadrature against the filtered kernel.
inline FnHandle vn_apply(const FnHandle& f, const ZonalSpec& spec, const SphereRule& rule) {
    if (f.domain != Domain::sphere || f.dim != rule.dim)
        throw std::invalid_argument("vn_apply: handle/rule mismatch");
    if (f.is_poly()) {
        return FnHandle::from_poly(Domain::sphere, vn_apply_poly(*f.poly, spec, rule),
                                   f.name + ".V" + std::to_string(spec.n));
    }
    const double lambda = spec.lambda();
    const double inv_area = 1.0 / sphere_area(rule.dim);
    auto vals = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t a = 0; a < rule.points.size(); ++a) (*vals)[a] = f(rule.points[a]);
    auto pts = std::make_shared<std::vector<Point>>(rule.points);
    auto wts = std::make_shared<std::vector<double>>(rule.weights);
    auto eta = spec.eta;
    int n = spec.n;
    return FnHandle::from_fn(Domain::sphere, rule.dim,
        [=](std::span<const double> x) {
            double acc = 0.0;
            for (size_t a = 0; a < pts->size(); ++a) {
                double t = std::clamp(dot(x, (*pts)[a]), -1.0, 1.0);
                acc += (*wts)[a] * (*vals)[a] * kernel_kn(n, lambda, eta, t);
            }
            return acc * inv_area;
        },
        f.name + ".V" + std::to_string(spec.n));
}

namespace detail {

// D_{i,j}^r of t -> g(<x,y>) in x stays inside the algebra spanned by
// g^{(k)}(u) v^a w^b with u = <x,y>, v = x_j y_i - x_i y_j, w = x_i y_i + x_j y_j:
// D u = v, D v = -w, D w = v.
using KernelTerms = std::map<std::array<int, 3>, double>;

inline KernelTerms dij_kernel_terms(int r) {
    KernelTerms cur{{{0, 0, 0}, 1.0}};
    for (int step = 0; step < r; ++step) {
        KernelTerms next;
        for (const auto& [key, c] : cur) {
            auto [k, a, b] = key;
            next[{k + 1, a + 1, b}] += c;
            if (a > 0) next[{k, a - 1, b + 1}] -= a * c;
            if (b > 0) next[{k, a + 1, b - 1}] += b * c;
        }
        for (auto it = next.begin(); it != next.end();)
            it = (it->second == 0.0) ? next.erase(it) : std::next(it);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace detail

/// D^r_{i,j}(V_n f) evaluated exactly through kernel derivatives, without
/// finite differencing. Axis indices 0-based.
inline FnHandle vn_dij_apply(const FnHandle& f, const ZonalSpec& spec, const SphereRule& rule,
                             int r, int i, int j) {
    if (f.domain != Domain::sphere || f.dim != rule.dim)
        throw std::invalid_argument("vn_dij_apply: handle/rule mismatch");
    if (r < 1 || i == j || i < 0 || j < 0 || i >= rule.dim || j >= rule.dim)
        throw std::invalid_argument("vn_dij_apply: bad order or axis pair");
    const double lambda = spec.lambda();
    const double inv_area = 1.0 / sphere_area(rule.dim);
    auto vals = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t a = 0; a < rule.points.size(); ++a) (*vals)[a] = f(rule.points[a]);
    auto pts = std::make_shared<std::vector<Point>>(rule.points);
    auto wts = std::make_shared<std::vector<double>>(rule.weights);
    auto terms = std::make_shared<detail::KernelTerms>(detail::dij_kernel_terms(r));
    auto eta = spec.eta;
    int n = spec.n;
    return FnHandle::from_fn(Domain::sphere, rule.dim,
        [=](std::span<const double> x) {
            double acc = 0.0;
            for (size_t a = 0; a < pts->size(); ++a) {
                const auto& y = (*pts)[a];
                double u = std::clamp(dot(x, y), -1.0, 1.0);
                double v = x[j] * y[i] - x[i] * y[j];
                double w = x[i] * y[i] + x[j] * y[j];
                auto der = kernel_kn_derivs(n, lambda, eta, u, r);
                double kv = 0.0;
                for (const auto& [key, c] : *terms) {
                    auto [k, av, bw] = key;
                    kv += c * der[k] * std::pow(v, av) * std::pow(w, bw);
                }
                acc += (*wts)[a] * (*vals)[a] * kv;
            }
            return acc * inv_area;
        },
        f.name + ".DV");
}

/// ||f - V_n f||_p, a near-best upper bound on the approximation error.
inline double en_upper(const FnHandle& f, int n, double p, const SphereRule& rule,
                       const CutoffEta& eta = {}, const SupRefine& refine = {}) {
    auto vf = vn_apply(f, ZonalSpec{n, rule.dim, eta}, rule);
    return lp_norm_sphere(fn_sub(f, vf), p, rule, refine);
}

/// D^r_{i,j} f as a handle: symbolic for polynomial handles, central
/// differences otherwise.
inline FnHandle dij_handle(const FnHandle& f, int r, int i, int j, double h = 1e-3) {
    if (f.is_poly())
        return FnHandle::from_poly(f.domain, dij_poly_pow(*f.poly, i, j, r), f.name + ".D");
    auto base = f;
    return FnHandle::from_fn(f.domain, f.dim,
        [base, r, i, j, h](std::span<const double> x) { return dij_num(base, r, i, j, x, h); },
        f.name + ".D");
}

/// Modulus of smoothness: sup over plane pairs and a nested grid of angles
/// theta = m t / M of the Lp norm of the r-th rotation difference.
inline double modulus_sphere(const FnHandle& f, int r, double t, double p, const SphereRule& rule,
                             int theta_grid = 16, const SupRefine& refine = {}) {
    if (r < 1 || !(t > 0.0)) throw std::invalid_argument("modulus_sphere: need r >= 1, t > 0");
    const int d = rule.dim;
    double best = 0.0;
    for (int m = 1; m <= theta_grid; ++m) {
        const double theta = t * m / theta_grid;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                auto diff = FnHandle::from_fn(Domain::sphere, d,
                    [&f, r, i, j, theta](std::span<const double> x) {
                        return forward_diff(f, r, i, j, theta, x);
                    },
                    "diff");
                best = std::max(best, lp_norm_sphere(diff, p, rule, refine));
            }
        }
    }
    return best;
}

struct KFuncResult {
    double value = 0.0;
    int arg_degree = 0;  // degree of the minimizing candidate V_m f
};

/// Upper bound of the K-functional: min over candidates g = V_m f of
/// ||f - g||_p + t^r max_{i<j} ||D^r_{i,j} g||_p.
inline KFuncResult kfunc_sphere_upper(const FnHandle& f, int r, double t, double p,
                                      const SphereRule& rule, std::span<const int> degrees,
                                      const CutoffEta& eta = {}, double h = 1e-3,
                                      const SupRefine& refine = {}) {
    if (degrees.empty()) throw std::invalid_argument("kfunc_sphere_upper: no candidate degrees");
    KFuncResult res{std::numeric_limits<double>::infinity(), 0};
    const int d = rule.dim;
    for (int m : degrees) {
        auto g = vn_apply(f, ZonalSpec{m, d, eta}, rule);
        double dist = lp_norm_sphere(fn_sub(f, g), p, rule, refine);
        double dmax = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                dmax = std::max(dmax, lp_norm_sphere(dij_handle(g, r, i, j, h), p, rule, refine));
        double val = dist + std::pow(t, r) * dmax;
        if (val < res.value) res = {val, m};
    }
    return res;
}

/// Spectral multiplier (k(k+d-2))^s applied to the degree components of f;
/// the constant component is annihilated.
inline FnHandle frac_laplacian_l2(const FnHandle& f, double s, int max_degree, const SphereRule& rule) {
    if (!(s > 0.0)) throw std::invalid_argument("frac_laplacian_l2: s must be positive");
    const int d = rule.dim;
    const double lambda = (d - 2) / 2.0;
    const double inv_area = 1.0 / sphere_area(d);
    auto vals = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t a = 0; a < rule.points.size(); ++a) (*vals)[a] = f(rule.points[a]);
    auto pts = std::make_shared<std::vector<Point>>(rule.points);
    auto wts = std::make_shared<std::vector<double>>(rule.weights);
    auto mult = std::make_shared<std::vector<double>>();
    for (int k = 0; k <= max_degree; ++k)
        mult->push_back(k == 0 ? 0.0 : std::pow(k * (k + d - 2.0), s));
    return FnHandle::from_fn(Domain::sphere, d,
        [=](std::span<const double> x) {
            double acc = 0.0;
            std::vector<double> z(max_degree + 1);
            for (size_t a = 0; a < pts->size(); ++a) {
                double t = std::clamp(dot(x, (*pts)[a]), -1.0, 1.0);
                zonal_all(max_degree, lambda, t, z);
                double kv = 0.0;
                for (int k = 1; k <= max_degree; ++k) kv += (*mult)[k] * z[k];
                acc += (*wts)[a] * (*vals)[a] * kv;
            }
            return acc * inv_area;
        },
        f.name + ".fraclap");
}

/// ||f||_p + sum_{i<j} ||D^r_{i,j} f||_p.
inline double sobolev_norm_sphere(const FnHandle& f, int r, double p, const SphereRule& rule,
                                  double h = 1e-3, const SupRefine& refine = {}) {
    double acc = lp_norm_sphere(f, p, rule, refine);
    for (int i = 0; i < rule.dim; ++i)
        for (int j = i + 1; j < rule.dim; ++j)
            acc += lp_norm_sphere(dij_handle(f, r, i, j, h), p, rule, refine);
    return acc;
}

/// ||f||_p + max_{i<j} sup over dyadic theta of
/// ||Delta^ell_{i,j,theta} D^r_{i,j} f||_p / theta^alpha.
inline double lipschitz_norm_sphere(const FnHandle& f, int r, double alpha, int ell, double p,
                                    const SphereRule& rule, int dyadic_levels = 8, double h = 1e-3,
                                    const SupRefine& refine = {}) {
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("lipschitz_norm_sphere: alpha in [0,1)");
    if (ell < 1) throw std::invalid_argument("lipschitz_norm_sphere: ell >= 1");
    const int d = rule.dim;
    double quot = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            FnHandle g = (r == 0) ? f : dij_handle(f, r, i, j, h);
            for (int k = 0; k <= dyadic_levels; ++k) {
                const double theta = std::pow(2.0, -k);
                auto diff = FnHandle::from_fn(Domain::sphere, d,
                    [&g, ell, i, j, theta](std::span<const double> x) {
                        return forward_diff(g, ell, i, j, theta, x);
                    },
                    "ldiff");
                quot = std::max(quot, lp_norm_sphere(diff, p, rule, refine) / std::pow(theta, alpha));
            }
        }
    }
    return lp_norm_sphere(f, p, rule, refine) + quot;
}

/// ||f||_p + sup over dyadic t of omega_{r+ell}(f, t)_p / t^{r+alpha}.
inline double hnorm_sphere(const FnHandle& f, int r, double alpha, int ell, double p,
                           const SphereRule& rule, int dyadic_levels = 8, int theta_grid = 16,
                           const SupRefine& refine = {}) {
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("hnorm_sphere: alpha in [0,1)");
    if (ell < 1) throw std::invalid_argument("hnorm_sphere: ell >= 1");
    double quot = 0.0;
    for (int k = 0; k <= dyadic_levels; ++k) {
        const double t = std::pow(2.0, -k);
        quot = std::max(quot, modulus_sphere(f, r + ell, t, p, rule, theta_grid, refine) /
                                  std::pow(t, r + alpha));
    }
    return lp_norm_sphere(f, p, rule, refine) + quot;
}

}  // namespace polyapprox
