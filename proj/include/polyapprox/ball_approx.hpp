#pragma once

// Approximation machinery on the weighted ball: reproducing kernels obtained
// by averaging zonal kernels of the lifted sphere over a small fiber, the
// filtered near-best operator built from them, best L2 errors from weighted
// kernel expansions, the two ball moduli of smoothness, K-functional upper
// bounds, and the Sobolev and Lipschitz style norms.
//
// Throughout, mu = (m-1)/2 with m in {1, 2}: the Chebyshev weight lifts to
// a two-point fiber and the constant weight to a circle fiber. The zonal
// index of the lifted sphere is lambda = (d + m - 2)/2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyapprox/ball.hpp"
#include "polyapprox/fn.hpp"
#include "polyapprox/gegenbauer.hpp"
#include "polyapprox/multipoly.hpp"
#include "polyapprox/sphere.hpp"
#include "polyapprox/sphere_approx.hpp"

namespace polyapprox {

struct BallKernelSpec {
    int n = 1;
    int d = 2;
    double mu = 0.5;
    CutoffEta eta{};
    int lift_points = 0;  // trapezoid resolution on the circle fiber; 0 = auto

    int m() const {
        if (std::abs(mu) < 1e-12) return 1;
        if (std::abs(mu - 0.5) < 1e-12) return 2;
        throw std::invalid_argument("BallKernelSpec: mu must be 0 or 1/2");
    }
    double lambda() const { return 0.5 * (d + m() - 2); }
};

namespace detail {

inline double binom_d(int n, int k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - j + 1) / j;
    return c;
}

/// Average of cos^i over the fiber: the two-point fiber gives 1 for even i,
/// the circle fiber the Wallis ratio (i-1)!!/i!!. Odd powers vanish.
inline double fiber_cos_avg(int m, int i) {
    if (i % 2 == 1) return 0.0;
    if (m == 1) return 1.0;
    double a = 1.0;
    for (int j = 1; j <= i / 2; ++j) a *= (2.0 * j - 1.0) / (2.0 * j);
    return a;
}

/// Fiber cosine samples with equal weights: {+1, -1} for the two-point
/// fiber, a trapezoid grid on the circle otherwise. The trapezoid is exact
/// for trigonometric polynomials below the node count, which covers zonal
/// kernels of matching degree.
inline std::vector<double> fiber_cosines(int m, int kmax, int lift_points) {
    if (m == 1) return {1.0, -1.0};
    const int nt = lift_points > 0 ? lift_points : std::max(2 * kmax + 2, 4);
    std::vector<double> c(nt);
    for (int j = 0; j < nt; ++j) c[j] = std::cos(2.0 * M_PI * j / nt);
    return c;
}

inline void check_in_ball(std::span<const double> x, const char* who) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    if (std::sqrt(n2) > 1.0 + 1e-12) throw std::invalid_argument(std::string(who) + ": point outside the ball");
}

}  // namespace detail

/// Degree-k reproducing kernel value, averaged over the lift fiber. The
/// plain average keeps P_0 identically one.
inline double pnmu_kernel(const BallKernelSpec& spec, int k, std::span<const double> x,
                          std::span<const double> y) {
    if (k < 0) throw std::invalid_argument("pnmu_kernel: negative degree");
    detail::check_in_ball(x, "pnmu_kernel");
    detail::check_in_ball(y, "pnmu_kernel");
    const double pp = detail::phi_clamped(x) * detail::phi_clamped(y);
    const double t0 = dot(x, y);
    auto cs = detail::fiber_cosines(spec.m(), k, spec.lift_points);
    std::vector<double> z(k + 1);
    double acc = 0.0;
    for (double c : cs) {
        zonal_all(k, spec.lambda(), std::clamp(t0 + pp * c, -1.0, 1.0), z);
        acc += z[k];
    }
    return acc / static_cast<double>(cs.size());
}

/// All kernel degrees 0..kmax at once, sharing the fiber average.
inline void pnmu_all(const BallKernelSpec& spec, int kmax, std::span<const double> x,
                     std::span<const double> y, std::vector<double>& out) {
    const double pp = detail::phi_clamped(x) * detail::phi_clamped(y);
    const double t0 = dot(x, y);
    auto cs = detail::fiber_cosines(spec.m(), kmax, spec.lift_points);
    out.assign(kmax + 1, 0.0);
    std::vector<double> z(kmax + 1);
    for (double c : cs) {
        zonal_all(kmax, spec.lambda(), std::clamp(t0 + pp * c, -1.0, 1.0), z);
        for (int k = 0; k <= kmax; ++k) out[k] += z[k];
    }
    for (auto& v : out) v /= static_cast<double>(cs.size());
}

namespace detail {

/// Assembles weighted node sums of kernel polynomials symbolically. The
/// fiber average kills odd powers of phi(x), so each kernel is a polynomial
/// in x; expanding the zonal argument binomially turns the node sum into
/// moments sum_q c_q phi(y_q)^i y_q^beta, which are collected once and reused
/// for every degree.
class BallKernelProjector {
  public:
    BallKernelProjector(const BallRule& rule, int kmax, const std::vector<double>& cq, int m)
        : d_(rule.dim), kmax_(kmax), m_(m), lambda_(0.5 * (rule.dim + m - 2)) {
        std::vector<Exponents> monos;
        Exponents e(d_, 0);
        std::function<void(int, int)> walk = [&](int pos, int left) {
            if (pos == d_ - 1) {
                e[pos] = left;
                monos.push_back(e);
                return;
            }
            for (int k = 0; k <= left; ++k) {
                e[pos] = k;
                walk(pos + 1, left - k);
            }
        };
        for (int deg = 0; deg <= kmax_; ++deg) walk(0, deg);

        std::vector<double> multinom(monos.size());
        std::vector<int> mdeg(monos.size());
        for (size_t t = 0; t < monos.size(); ++t) {
            int deg = 0;
            for (int v : monos[t]) deg += v;
            mdeg[t] = deg;
            double c = 1.0;
            int left = deg;
            for (int v : monos[t]) {
                c *= binom_d(left, v);
                left -= v;
            }
            multinom[t] = c;
        }

        // moments M[i/2][mono] = sum_q c_q phi(y_q)^i y_q^mono, even i only
        const int ni = kmax_ / 2 + 1;
        std::vector<std::vector<double>> M(ni, std::vector<double>(monos.size(), 0.0));
        std::vector<double> mv(monos.size());
        for (size_t q = 0; q < rule.points.size(); ++q) {
            if (cq[q] == 0.0) continue;
            const auto& y = rule.points[q];
            for (size_t t = 0; t < monos.size(); ++t) {
                double v = 1.0;
                for (int a = 0; a < d_; ++a)
                    for (int rep = 0; rep < monos[t][a]; ++rep) v *= y[a];
                mv[t] = v;
            }
            const double ph2 = std::max(0.0, 1.0 - dot(y, y));
            double phi_i = 1.0;
            for (int half = 0; half < ni; ++half) {
                const double w = cq[q] * phi_i;
                for (size_t t = 0; t < monos.size(); ++t)
                    if (mdeg[t] + 2 * half <= kmax_) M[half][t] += w * mv[t];
                phi_i *= ph2;
            }
        }

        // Q^s for Q = 1 - |x|^2
        std::vector<MultiPoly> qpow;
        qpow.push_back(MultiPoly::constant(d_, 1.0));
        const MultiPoly q1 = one_minus_norm2(d_);
        for (int s = 1; s <= kmax_ / 2; ++s) qpow.push_back(qpow.back() * q1);

        // blocks[i/2][e] = Q^{i/2} * sum_{|beta|=e} multinom * M * x^beta
        blocks_.assign(ni, {});
        for (int half = 0; half < ni; ++half) {
            const int emax = kmax_ - 2 * half;
            blocks_[half].reserve(emax + 1);
            for (int eg = 0; eg <= emax; ++eg) {
                MultiPoly part(d_);
                for (size_t t = 0; t < monos.size(); ++t)
                    if (mdeg[t] == eg && M[half][t] != 0.0)
                        part.add_term(monos[t], multinom[t] * M[half][t]);
                blocks_[half].push_back(part * qpow[half]);
            }
        }
    }

    /// sum_q c_q P_k(., y_q) as a polynomial.
    MultiPoly project(int k) const {
        if (k < 0 || k > kmax_) throw std::invalid_argument("BallKernelProjector: degree out of range");
        const auto zc = zonal_coeffs(k, lambda_);
        MultiPoly acc(d_);
        for (int j = 0; j <= k; ++j) {
            if (zc[j] == 0.0) continue;
            for (int i = 0; i <= j; i += 2) {
                const double w = zc[j] * binom_d(j, i) * fiber_cos_avg(m_, i);
                if (w == 0.0) continue;
                acc = acc + blocks_[i / 2][j - i].scaled(w);
            }
        }
        return acc;
    }

  private:
    int d_, kmax_, m_;
    double lambda_;
    std::vector<std::vector<MultiPoly>> blocks_;
};

}  // namespace detail

/// Weighted projection onto the degree-k orthogonal component, symbolically.
inline MultiPoly proj_degree_ball_poly(const MultiPoly& p, int k, const BallRule& rule) {
    if (p.dim() != rule.dim) throw std::invalid_argument("proj_degree_ball_poly: dimension mismatch");
    const double a_mu = ball_weight(rule.dim, rule.mu).a_mu;
    const int m = std::abs(rule.mu) < 1e-12 ? 1 : 2;
    if (m == 2 && std::abs(rule.mu - 0.5) > 1e-12)
        throw std::invalid_argument("proj_degree_ball_poly: mu must be 0 or 1/2");
    std::vector<double> cq(rule.points.size());
    for (size_t q = 0; q < cq.size(); ++q) cq[q] = a_mu * rule.weights[q] * p.eval(rule.points[q]);
    detail::BallKernelProjector proj(rule, k, cq, m);
    return proj.project(k);
}

/// The filtered near-best operator, symbolically for polynomial input.
inline MultiPoly vnmu_apply_poly(const MultiPoly& p, const BallKernelSpec& spec,
                                 const BallRule& rule) {
    if (p.dim() != spec.d || rule.dim != spec.d)
        throw std::invalid_argument("vnmu_apply_poly: dimension mismatch");
    if (std::abs(rule.mu - spec.mu) > 1e-12)
        throw std::invalid_argument("vnmu_apply_poly: rule weight does not match the kernel");
    const double a_mu = ball_weight(spec.d, spec.mu).a_mu;
    const int kmax = std::min(2 * spec.n, p.degree());
    std::vector<double> cq(rule.points.size());
    for (size_t q = 0; q < cq.size(); ++q) cq[q] = a_mu * rule.weights[q] * p.eval(rule.points[q]);
    detail::BallKernelProjector proj(rule, kmax, cq, spec.m());
    MultiPoly acc(spec.d);
    for (int k = 0; k <= kmax; ++k) {
        const double s = eta_eval(spec.eta, static_cast<double>(k) / spec.n);
        if (s == 0.0) continue;
        acc = acc + proj.project(k).scaled(s);
    }
    return acc;
}

/// V_n for the weighted ball: polynomial handles go through the symbolic
/// path, everything else becomes a quadrature closure over the filtered
/// kernel sum with node samples of f taken once.
inline FnHandle vnmu_apply(const FnHandle& f, const BallKernelSpec& spec, const BallRule& rule) {
    if (f.dim != spec.d || rule.dim != spec.d)
        throw std::invalid_argument("vnmu_apply: dimension mismatch");
    if (std::abs(rule.mu - spec.mu) > 1e-12)
        throw std::invalid_argument("vnmu_apply: rule weight does not match the kernel");
    const std::string vname = "V" + std::to_string(spec.n) + "[" + f.name + "]";
    if (f.is_poly())
        return FnHandle::from_poly(Domain::ball, vnmu_apply_poly(*f.poly, spec, rule), vname);

    const double a_mu = ball_weight(spec.d, spec.mu).a_mu;
    auto vals = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t q = 0; q < vals->size(); ++q)
        (*vals)[q] = a_mu * rule.weights[q] * f(rule.points[q]);
    auto pts = std::make_shared<std::vector<Point>>(rule.points);
    auto phis = std::make_shared<std::vector<double>>(rule.points.size());
    for (size_t q = 0; q < phis->size(); ++q) (*phis)[q] = detail::phi_clamped((*pts)[q]);
    auto cs = std::make_shared<std::vector<double>>(
        detail::fiber_cosines(spec.m(), 2 * spec.n, spec.lift_points));
    std::vector<double> ew(2 * spec.n + 1);
    for (int k = 0; k <= 2 * spec.n; ++k)
        ew[k] = eta_eval(spec.eta, static_cast<double>(k) / spec.n);
    auto etaw = std::make_shared<std::vector<double>>(std::move(ew));
    const int n = spec.n;
    const double lambda = spec.lambda();

    return FnHandle::from_fn(Domain::ball, spec.d,
        [vals, pts, phis, cs, etaw, n, lambda](std::span<const double> x) {
            const double phx = detail::phi_clamped(x);
            std::vector<double> z(2 * n + 1);
            double acc = 0.0;
            for (size_t q = 0; q < pts->size(); ++q) {
                const double t0 = dot(x, (*pts)[q]);
                const double pp = phx * (*phis)[q];
                double kv = 0.0;
                for (double c : *cs) {
                    zonal_all(2 * n, lambda, std::clamp(t0 + pp * c, -1.0, 1.0), z);
                    for (int k = 0; k <= 2 * n; ++k) kv += (*etaw)[k] * z[k];
                }
                acc += (*vals)[q] * kv / static_cast<double>(cs->size());
            }
            return acc;
        },
        vname);
}

/// Per-degree squared weighted L2 norms of the kernel projections, via the
/// self-adjointness pair sum. Norms are plain integrals against W_mu; the
/// single normalization constant of the projector is folded in once.
struct BallExpansion {
    int dim = 0;
    double mu = 0.0;
    int max_degree = 0;
    std::vector<double> proj_norm_sq;
    double f_norm_sq = 0.0;

    double head(int n) const {
        double acc = 0.0;
        for (int k = 0; k <= n && k <= max_degree; ++k) acc += proj_norm_sq[k];
        return acc;
    }
};

inline BallExpansion ball_expansion(const FnHandle& f, int max_degree, const BallRule& rule,
                                    int lift_points = 0) {
    if (f.dim != rule.dim) throw std::invalid_argument("ball_expansion: dimension mismatch");
    if (max_degree < 0) throw std::invalid_argument("ball_expansion: negative degree");
    BallKernelSpec spec;
    spec.d = rule.dim;
    spec.mu = rule.mu;
    spec.lift_points = lift_points;
    const int m = spec.m();
    const double a_mu = ball_weight(rule.dim, rule.mu).a_mu;

    BallExpansion ex;
    ex.dim = rule.dim;
    ex.mu = rule.mu;
    ex.max_degree = max_degree;
    ex.proj_norm_sq.assign(max_degree + 1, 0.0);

    const size_t nq = rule.points.size();
    std::vector<double> cv(nq), ph(nq);
    for (size_t q = 0; q < nq; ++q) {
        cv[q] = rule.weights[q] * f(rule.points[q]);
        ph[q] = detail::phi_clamped(rule.points[q]);
        ex.f_norm_sq += cv[q] * f(rule.points[q]);
    }

    auto cs = detail::fiber_cosines(m, max_degree, lift_points);
    const double lambda = spec.lambda();
    std::vector<double> z(max_degree + 1), pk(max_degree + 1);
    for (size_t a = 0; a < nq; ++a) {
        if (cv[a] == 0.0) continue;
        for (size_t q = a; q < nq; ++q) {
            const double t0 = dot(rule.points[a], rule.points[q]);
            const double pp = ph[a] * ph[q];
            std::fill(pk.begin(), pk.end(), 0.0);
            for (double c : cs) {
                zonal_all(max_degree, lambda, std::clamp(t0 + pp * c, -1.0, 1.0), z);
                for (int k = 0; k <= max_degree; ++k) pk[k] += z[k];
            }
            const double scale = (a == q ? 1.0 : 2.0) * cv[a] * cv[q] /
                                 static_cast<double>(cs.size());
            for (int k = 0; k <= max_degree; ++k) ex.proj_norm_sq[k] += scale * pk[k];
        }
    }
    for (auto& v : ex.proj_norm_sq) v *= a_mu;
    return ex;
}

/// Best weighted L2 error by polynomials of total degree <= n (the ball
/// convention includes degree n itself).
inline double best_l2_error_ball(const BallExpansion& ex, int n) {
    if (n < 0) throw std::invalid_argument("best_l2_error_ball: negative degree");
    double rad = ex.f_norm_sq - ex.head(n);
    const double tol = 1e-8 * std::max(1.0, ex.f_norm_sq);
    if (rad < -tol) throw std::runtime_error("best_l2_error_ball: tail lost positivity");
    return std::sqrt(std::max(0.0, rad));
}

inline double best_l2_error_ball(const FnHandle& f, int n, const BallRule& rule, int max_degree,
                                 int lift_points = 0) {
    if (max_degree < n) throw std::invalid_argument("best_l2_error_ball: expansion too short");
    return best_l2_error_ball(ball_expansion(f, max_degree, rule, lift_points), n);
}

/// Modulus of smoothness on the weighted ball: plane rotation differences of
/// f inside B^d plus rotation differences of the lift in each (i, last)
/// plane, measured one dimension up; the Chebyshev case takes the lifted
/// term on the sphere, the constant-weight case on the lifted ball.
inline double modulus_ball(const FnHandle& f, int r, double t, double p, double mu, int degree,
                           int theta_grid = 16, const SupRefine& refine = {}) {
    if (r < 1 || !(t > 0.0)) throw std::invalid_argument("modulus_ball: need r >= 1, t > 0");
    const int d = f.dim;
    const int m = std::abs(mu) < 1e-12 ? 1 : (std::abs(mu - 0.5) < 1e-12 ? 2 : 0);
    if (m == 0) throw std::invalid_argument("modulus_ball: mu must be 0 or 1/2");
    BallRule rot_rule;
    if (d >= 2) rot_rule = ball_rule(d, mu, degree);
    SphereRule ext_sphere;
    BallRule ext_ball;
    if (m == 1)
        ext_sphere = sphere_rule(d + 1, degree);
    else
        ext_ball = ball_rule(d + 1, 0.0, degree);
    const FnHandle lift = extend_fn(f);

    double best = 0.0;
    for (int g = 1; g <= theta_grid; ++g) {
        const double theta = t * g / theta_grid;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                auto diff = FnHandle::from_fn(Domain::ball, d,
                    [f, r, i, j, theta](std::span<const double> x) {
                        return forward_diff(f, r, i, j, theta, x);
                    });
                best = std::max(best, lp_norm_ball(diff, p, rot_rule, refine));
            }
        }
        for (int i = 0; i < d; ++i) {
            auto diff = FnHandle::from_fn(Domain::ball, d + 1,
                [lift, r, i, d, theta](std::span<const double> y) {
                    return forward_diff(lift, r, i, d, theta, y);
                });
            if (m == 1) {
                diff.domain = Domain::sphere;
                best = std::max(best, lp_norm_sphere(diff, p, ext_sphere, refine));
            } else {
                best = std::max(best, lp_norm_ball(diff, p, ext_ball, refine));
            }
        }
    }
    return best;
}

/// The unweighted hat modulus: rotation differences plus central differences
/// with step h phi(x) along each axis, zero when the stencil leaves the ball.
inline double hat_modulus_ball(const FnHandle& f, int r, double t, double p, int degree,
                               int h_grid = 16, const SupRefine& refine = {}) {
    if (r < 1 || !(t > 0.0)) throw std::invalid_argument("hat_modulus_ball: need r >= 1, t > 0");
    const int d = f.dim;
    BallRule rule = ball_rule(d, 0.5, degree);  // constant weight: plain volume
    double best = 0.0;
    for (int g = 1; g <= h_grid; ++g) {
        const double h = t * g / h_grid;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                auto diff = FnHandle::from_fn(Domain::ball, d,
                    [f, r, i, j, h](std::span<const double> x) {
                        return forward_diff(f, r, i, j, h, x);
                    });
                best = std::max(best, lp_norm_ball(diff, p, rule, refine));
            }
        }
        for (int i = 0; i < d; ++i) {
            auto diff = FnHandle::from_fn(Domain::ball, d,
                [f, r, i, h](std::span<const double> x) {
                    return central_diff_phi(f, r, i, h, x);
                });
            best = std::max(best, lp_norm_ball(diff, p, rule, refine));
        }
    }
    return best;
}

/// phi^r times the r-th plain partial, as a handle.
inline FnHandle phi_partial_handle(const FnHandle& f, int r, int i, double h = 1e-3) {
    if (r < 0) throw std::invalid_argument("phi_partial_handle: negative order");
    if (i < 0 || i >= f.dim) throw std::invalid_argument("phi_partial_handle: index out of range");
    if (r == 0) return f;
    if (f.is_poly()) {
        MultiPoly q = *f.poly;
        for (int s = 0; s < r; ++s) q = q.partial(i);
        auto qp = std::make_shared<const MultiPoly>(std::move(q));
        return FnHandle::from_fn(Domain::ball, f.dim,
            [qp, r](std::span<const double> x) {
                return std::pow(detail::phi_clamped(x), r) * qp->eval(x);
            },
            f.name + ".phidr");
    }
    auto base = f;
    return FnHandle::from_fn(Domain::ball, f.dim,
        [base, r, i, h](std::span<const double> x) {
            return std::pow(detail::phi_clamped(x), r) *
                   detail::partial_pow_num(base, r, i, x, h);
        },
        f.name + ".phidr");
}

/// Weighted Sobolev-style norm: the function, all plane derivatives of order
/// r, and the phi-scaled plain partials.
inline double sobolev_norm_ball(const FnHandle& f, int r, double p, double mu, int degree,
                                double h = 1e-3, const SupRefine& refine = {}) {
    if (r < 1) throw std::invalid_argument("sobolev_norm_ball: order must be >= 1");
    const int d = f.dim;
    BallRule rule = ball_rule(d, mu, degree);
    double acc = lp_norm_ball(f, p, rule, refine);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            acc += lp_norm_ball(dij_handle(f, r, i, j, h), p, rule, refine);
    for (int i = 0; i < d; ++i) acc += lp_norm_ball(phi_partial_handle(f, r, i, h), p, rule, refine);
    return acc;
}

/// One K-functional candidate: distance to V_n f plus its derivative norms.
struct BallKCandidate {
    int degree = 0;
    double dist = 0.0;
    double rot = 0.0;  // largest plane-derivative norm of the candidate
    double ext = 0.0;  // largest extension-derivative (or phi-partial) norm
};

struct KFuncBallResult {
    double value = 0.0;
    int arg_degree = 0;
};

inline KFuncBallResult kfunc_ball_value(std::span<const BallKCandidate> prof, double t, int r) {
    if (prof.empty()) throw std::invalid_argument("kfunc_ball_value: no candidates");
    KFuncBallResult best;
    best.value = std::numeric_limits<double>::infinity();
    const double tr = std::pow(t, r);
    for (const auto& c : prof) {
        const double v = c.dist + tr * (c.rot + c.ext);
        if (v < best.value) {
            best.value = v;
            best.arg_degree = c.degree;
        }
    }
    return best;
}

/// Candidate profile for the K-functional with the extension-derivative
/// bracket. The t-independent parts are computed once so a scan over t is a
/// cheap minimum. The extension term is measured where the definition puts
/// it: on the lifted sphere for the Chebyshev weight, on the lifted ball
/// with Chebyshev weight for the constant weight.
inline std::vector<BallKCandidate> kfunc_ball_profile(const FnHandle& f, int r, double p,
                                                      double mu, std::span<const int> degrees,
                                                      int quad_degree, const CutoffEta& eta = {},
                                                      double h = 1e-3,
                                                      const SupRefine& refine = {}) {
    if (r < 1 || r > 4) throw std::invalid_argument("kfunc_ball_profile: order must be in [1, 4]");
    if (degrees.empty()) throw std::invalid_argument("kfunc_ball_profile: no candidate degrees");
    const int d = f.dim;
    const int m = std::abs(mu) < 1e-12 ? 1 : (std::abs(mu - 0.5) < 1e-12 ? 2 : 0);
    if (m == 0) throw std::invalid_argument("kfunc_ball_profile: mu must be 0 or 1/2");
    BallRule rule = ball_rule(d, mu, quad_degree);
    SphereRule ext_sphere;
    BallRule ext_ball;
    if (m == 1)
        ext_sphere = sphere_rule(d + 1, quad_degree);
    else
        ext_ball = ball_rule(d + 1, 0.0, quad_degree);

    std::vector<BallKCandidate> prof;
    for (int n : degrees) {
        BallKernelSpec spec;
        spec.n = n;
        spec.d = d;
        spec.mu = mu;
        spec.eta = eta;
        FnHandle g = vnmu_apply(f, spec, rule);
        BallKCandidate cand;
        cand.degree = n;
        cand.dist = lp_norm_ball(fn_sub(f, g), p, rule, refine);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                cand.rot = std::max(cand.rot, lp_norm_ball(dij_handle(g, r, i, j, h), p, rule, refine));
        for (int i = 0; i < d; ++i) {
            auto gd = FnHandle::from_fn(Domain::ball, d + 1,
                [g, r, i, h](std::span<const double> y) { return d_id1_tilde(g, r, i, y, h); });
            if (m == 1) {
                gd.domain = Domain::sphere;
                cand.ext = std::max(cand.ext, lp_norm_sphere(gd, p, ext_sphere, refine));
            } else {
                cand.ext = std::max(cand.ext, lp_norm_ball(gd, p, ext_ball, refine));
            }
        }
        prof.push_back(cand);
    }
    return prof;
}

/// Candidate profile for the hat K-functional, whose second bracket uses
/// phi^r times plain partials instead of extension derivatives.
inline std::vector<BallKCandidate> hat_kfunc_ball_profile(const FnHandle& f, int r, double p,
                                                          double mu, std::span<const int> degrees,
                                                          int quad_degree,
                                                          const CutoffEta& eta = {},
                                                          double h = 1e-3,
                                                          const SupRefine& refine = {}) {
    if (r < 1) throw std::invalid_argument("hat_kfunc_ball_profile: order must be >= 1");
    if (degrees.empty()) throw std::invalid_argument("hat_kfunc_ball_profile: no candidate degrees");
    const int d = f.dim;
    BallRule rule = ball_rule(d, mu, quad_degree);
    std::vector<BallKCandidate> prof;
    for (int n : degrees) {
        BallKernelSpec spec;
        spec.n = n;
        spec.d = d;
        spec.mu = mu;
        spec.eta = eta;
        FnHandle g = vnmu_apply(f, spec, rule);
        BallKCandidate cand;
        cand.degree = n;
        cand.dist = lp_norm_ball(fn_sub(f, g), p, rule, refine);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                cand.rot = std::max(cand.rot, lp_norm_ball(dij_handle(g, r, i, j, h), p, rule, refine));
        for (int i = 0; i < d; ++i)
            cand.ext = std::max(cand.ext, lp_norm_ball(phi_partial_handle(g, r, i, h), p, rule, refine));
        prof.push_back(cand);
    }
    return prof;
}

inline KFuncBallResult kfunc_ball_upper(const FnHandle& f, int r, double t, double p, double mu,
                                        std::span<const int> degrees, int quad_degree,
                                        const CutoffEta& eta = {}, double h = 1e-3,
                                        const SupRefine& refine = {}) {
    return kfunc_ball_value(kfunc_ball_profile(f, r, p, mu, degrees, quad_degree, eta, h, refine),
                            t, r);
}

inline KFuncBallResult hat_kfunc_ball_upper(const FnHandle& f, int r, double t, double p,
                                            double mu, std::span<const int> degrees,
                                            int quad_degree, const CutoffEta& eta = {},
                                            double h = 1e-3, const SupRefine& refine = {}) {
    return kfunc_ball_value(
        hat_kfunc_ball_profile(f, r, p, mu, degrees, quad_degree, eta, h, refine), t, r);
}

/// Lipschitz-style norm: difference quotients of order ell applied to the
/// order-r derivatives, in the plane directions and through the lift.
inline double lipschitz_norm_ball(const FnHandle& f, int r, double alpha, int ell, double p,
                                  double mu, int degree, int dyadic_levels = 8, double h = 1e-3,
                                  const SupRefine& refine = {}) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("lipschitz_norm_ball: alpha must be in [0, 1)");
    if (ell < 1) throw std::invalid_argument("lipschitz_norm_ball: ell must be >= 1");
    if (r < 0 || r > 4) throw std::invalid_argument("lipschitz_norm_ball: order must be in [0, 4]");
    const int d = f.dim;
    const int m = std::abs(mu) < 1e-12 ? 1 : (std::abs(mu - 0.5) < 1e-12 ? 2 : 0);
    if (m == 0) throw std::invalid_argument("lipschitz_norm_ball: mu must be 0 or 1/2");
    BallRule rule = ball_rule(d, mu, degree);
    SphereRule ext_sphere;
    BallRule ext_ball;
    if (m == 1)
        ext_sphere = sphere_rule(d + 1, degree);
    else
        ext_ball = ball_rule(d + 1, 0.0, degree);

    double acc = lp_norm_ball(f, p, rule, refine);

    double rot_best = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            FnHandle df = (r == 0) ? f : dij_handle(f, r, i, j, h);
            for (int k = 0; k <= dyadic_levels; ++k) {
                const double theta = std::pow(2.0, -k);
                auto diff = FnHandle::from_fn(Domain::ball, d,
                    [df, ell, i, j, theta](std::span<const double> x) {
                        return forward_diff(df, ell, i, j, theta, x);
                    });
                rot_best = std::max(rot_best,
                                    lp_norm_ball(diff, p, rule, refine) / std::pow(theta, alpha));
            }
        }
    }
    acc += rot_best;

    double ext_best = 0.0;
    for (int i = 0; i < d; ++i) {
        auto gd = FnHandle::from_fn(Domain::ball, d + 1,
            [f, r, i, h](std::span<const double> y) { return d_id1_tilde(f, r, i, y, h); });
        for (int k = 0; k <= dyadic_levels; ++k) {
            const double theta = std::pow(2.0, -k);
            auto diff = FnHandle::from_fn(Domain::ball, d + 1,
                [gd, ell, i, d, theta](std::span<const double> y) {
                    return forward_diff(gd, ell, i, d, theta, y);
                });
            double nv;
            if (m == 1) {
                diff.domain = Domain::sphere;
                nv = lp_norm_sphere(diff, p, ext_sphere, refine);
            } else {
                nv = lp_norm_ball(diff, p, ext_ball, refine);
            }
            ext_best = std::max(ext_best, nv / std::pow(theta, alpha));
        }
    }
    return acc + ext_best;
}

/// The modulus-based companion norm: the largest dyadic value of
/// modulus(f, t) / t^(r + alpha) with the order bumped by ell.
inline double hnorm_ball(const FnHandle& f, int r, double alpha, int ell, double p, double mu,
                         int degree, int dyadic_levels = 8, int theta_grid = 16,
                         const SupRefine& refine = {}) {
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("hnorm_ball: alpha must be in [0, 1)");
    if (ell < 1) throw std::invalid_argument("hnorm_ball: ell must be >= 1");
    BallRule rule = ball_rule(f.dim, mu, degree);
    double acc = lp_norm_ball(f, p, rule, refine);
    double best = 0.0;
    for (int k = 0; k <= dyadic_levels; ++k) {
        const double t = std::pow(2.0, -k);
        best = std::max(best, modulus_ball(f, r + ell, t, p, mu, degree, theta_grid, refine) /
                                  std::pow(t, r + alpha));
    }
    return acc + best;
}

}  // namespace polyapprox
