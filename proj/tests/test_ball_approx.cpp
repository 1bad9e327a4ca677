#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "polyapprox/ball.hpp"
#include "polyapprox/ball_approx.hpp"
#include "polyapprox/fn.hpp"
#include "polyapprox/multipoly.hpp"
#include "polyapprox/sphere.hpp"
#include "polyapprox/sphere_approx.hpp"

using namespace polyapprox;

namespace {

constexpr double INF = std::numeric_limits<double>::infinity();
constexpr double PI = 3.14159265358979323846;

MultiPoly random_poly(int dim, int deg, std::mt19937& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    MultiPoly p = MultiPoly::constant(dim, coeff(rng));
    std::vector<int> e(dim, 0);
    std::function<void(int, int)> walk = [&](int pos, int left) {
        if (pos == dim) {
            p.add_term(e, coeff(rng));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[pos] = k;
            walk(pos + 1, left - k);
        }
        e[pos] = 0;
    };
    walk(0, deg);
    return p;
}

Point random_interior(int dim, std::mt19937& rng, double rmax = 0.9) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Point x(dim);
        double n2 = 0.0;
        for (auto& v : x) {
            v = u(rng);
            n2 += v * v;
        }
        if (n2 < rmax * rmax) return x;
    }
}

FnHandle handle(const MultiPoly& p) { return FnHandle::from_poly(Domain::ball, p); }

FnHandle opaque(const MultiPoly& p) {
    return FnHandle::from_fn(Domain::ball, p.dim(),
                             [p](std::span<const double> x) { return p.eval(x); });
}

double ls_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double cheb_t(int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); }

// Best weighted L2 error by direct least squares in the monomial basis,
// using the same rule, so expansion-based errors have an independent check.
double ls_best_error(const FnHandle& f, int n, const BallRule& rule) {
    const int d = rule.dim;
    std::vector<Exponents> basis;
    Exponents e(d, 0);
    for (int deg = 0; deg <= n; ++deg) {
        std::function<void(int, int)> fixed = [&](int pos, int left) {
            if (pos == d - 1) {
                e[pos] = left;
                basis.push_back(e);
                return;
            }
            for (int k = 0; k <= left; ++k) {
                e[pos] = k;
                fixed(pos + 1, left - k);
            }
        };
        fixed(0, deg);
    }
    const size_t nb = basis.size();
    auto mono_at = [&](const Exponents& ex, const Point& x) {
        double v = 1.0;
        for (int a = 0; a < d; ++a)
            for (int rep = 0; rep < ex[a]; ++rep) v *= x[a];
        return v;
    };
    std::vector<std::vector<double>> G(nb, std::vector<double>(nb, 0.0));
    std::vector<double> b(nb, 0.0);
    double fsq = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
        const double w = rule.weights[q];
        const double fv = f(rule.points[q]);
        fsq += w * fv * fv;
        std::vector<double> mv(nb);
        for (size_t a = 0; a < nb; ++a) mv[a] = mono_at(basis[a], rule.points[q]);
        for (size_t a = 0; a < nb; ++a) {
            b[a] += w * fv * mv[a];
            for (size_t c = a; c < nb; ++c) G[a][c] += w * mv[a] * mv[c];
        }
    }
    for (size_t a = 0; a < nb; ++a)
        for (size_t c = 0; c < a; ++c) G[a][c] = G[c][a];
    // Gaussian elimination with partial pivoting
    std::vector<double> rhs = b;
    for (size_t col = 0; col < nb; ++col) {
        size_t piv = col;
        for (size_t row = col + 1; row < nb; ++row)
            if (std::abs(G[row][col]) > std::abs(G[piv][col])) piv = row;
        std::swap(G[col], G[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (size_t row = col + 1; row < nb; ++row) {
            const double m = G[row][col] / G[col][col];
            for (size_t cc = col; cc < nb; ++cc) G[row][cc] -= m * G[col][cc];
            rhs[row] -= m * rhs[col];
        }
    }
    std::vector<double> coef(nb);
    for (size_t row = nb; row-- > 0;) {
        double acc = rhs[row];
        for (size_t cc = row + 1; cc < nb; ++cc) acc -= G[row][cc] * coef[cc];
        coef[row] = acc / G[row][row];
    }
    double proj = 0.0;
    for (size_t a = 0; a < nb; ++a) proj += coef[a] * b[a];
    return std::sqrt(std::max(0.0, fsq - proj));
}

}  // namespace

TEST_CASE("kernel degree zero is flat and kernels are symmetric") {
    std::mt19937 rng(901);
    for (double mu : {0.0, 0.5}) {
        BallKernelSpec spec;
        spec.d = 2;
        spec.mu = mu;
        for (int rep = 0; rep < 8; ++rep) {
            Point x = random_interior(2, rng), y = random_interior(2, rng);
            CHECK(pnmu_kernel(spec, 0, x, y) == Catch::Approx(1.0).margin(1e-12));
            for (int k = 1; k <= 6; ++k) {
                const double xy = pnmu_kernel(spec, k, x, y);
                const double yx = pnmu_kernel(spec, k, y, x);
                CHECK(xy == Catch::Approx(yx).margin(1e-10 * (1.0 + std::abs(xy))));
            }
            std::vector<double> all;
            pnmu_all(spec, 6, x, y, all);
            for (int k = 0; k <= 6; ++k)
                CHECK(all[k] == Catch::Approx(pnmu_kernel(spec, k, x, y)).margin(1e-11));
        }
    }
    BallKernelSpec bad;
    bad.mu = 0.3;
    Point o{0.0, 0.0};
    CHECK_THROWS(pnmu_kernel(bad, 1, o, o));
    BallKernelSpec ok;
    ok.d = 2;
    CHECK_THROWS(pnmu_kernel(ok, -1, o, o));
    Point far{1.5, 0.0};
    CHECK_THROWS(pnmu_kernel(ok, 1, far, o));
}

TEST_CASE("interval kernels match the classical families") {
    std::mt19937 rng(902);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    BallKernelSpec cheb;
    cheb.d = 1;
    cheb.mu = 0.0;
    BallKernelSpec leg;
    leg.d = 1;
    leg.mu = 0.5;
    CHECK(cheb.lambda() == Catch::Approx(0.0));
    CHECK(leg.lambda() == Catch::Approx(0.5));
    for (int rep = 0; rep < 12; ++rep) {
        const double x = u(rng), y = u(rng);
        Point px{x}, py{y};
        for (int k = 1; k <= 6; ++k) {
            CHECK(pnmu_kernel(cheb, k, px, py) ==
                  Catch::Approx(2.0 * cheb_t(k, x) * cheb_t(k, y)).margin(1e-10));
            CHECK(pnmu_kernel(leg, k, px, py) ==
                  Catch::Approx((2.0 * k + 1.0) * std::legendre(k, x) * std::legendre(k, y))
                      .margin(1e-10));
        }
    }
}

TEST_CASE("kernels reproduce themselves under weighted quadrature") {
    std::mt19937 rng(903);
    for (double mu : {0.0, 0.5}) {
        BallKernelSpec spec;
        spec.d = 2;
        spec.mu = mu;
        BallRule rule = ball_rule(2, mu, 20);
        const double a_mu = ball_weight(2, mu).a_mu;
        for (int k = 0; k <= 4; ++k) {
            Point x = random_interior(2, rng), z = random_interior(2, rng);
            double acc = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q)
                acc += a_mu * rule.weights[q] * pnmu_kernel(spec, k, x, rule.points[q]) *
                       pnmu_kernel(spec, k, rule.points[q], z);
            const double direct = pnmu_kernel(spec, k, x, z);
            CHECK(acc == Catch::Approx(direct).margin(1e-8 * (1.0 + std::abs(direct))));
        }
    }
}

TEST_CASE("symbolic projections split polynomials by degree") {
    std::mt19937 rng(904);
    for (double mu : {0.0, 0.5}) {
        BallRule rule = ball_rule(2, mu, 24);
        MultiPoly p = random_poly(2, 4, rng);
        std::vector<MultiPoly> parts;
        for (int k = 0; k <= 4; ++k) parts.push_back(proj_degree_ball_poly(p, k, rule));
        for (int rep = 0; rep < 20; ++rep) {
            Point x = random_interior(2, rng);
            double acc = 0.0;
            for (const auto& part : parts) acc += part.eval(x);
            CHECK(acc == Catch::Approx(p.eval(x)).margin(1e-9));
        }
        // inner-degree pieces are idempotent fixed points and mutually orthogonal
        MultiPoly p2 = proj_degree_ball_poly(parts[2], 2, rule);
        MultiPoly p3 = proj_degree_ball_poly(parts[3], 3, rule);
        for (int rep = 0; rep < 10; ++rep) {
            Point x = random_interior(2, rng);
            CHECK(p2.eval(x) == Catch::Approx(parts[2].eval(x)).margin(1e-9));
            CHECK(p3.eval(x) == Catch::Approx(parts[3].eval(x)).margin(1e-9));
        }
        const MultiPoly cross = parts[2] * parts[3];
        CHECK(integrate_ball(handle(cross), rule) == Catch::Approx(0.0).margin(1e-9));
    }
    // the linear coordinate sits entirely in degree one
    BallRule rule = ball_rule(2, 0.5, 12);
    MultiPoly x0 = MultiPoly::monomial(2, {1, 0}, 1.0);
    MultiPoly off = proj_degree_ball_poly(x0, 0, rule);
    MultiPoly on = proj_degree_ball_poly(x0, 1, rule);
    std::mt19937 rng2(905);
    for (int rep = 0; rep < 10; ++rep) {
        Point x = random_interior(2, rng2);
        CHECK(off.eval(x) == Catch::Approx(0.0).margin(1e-12));
        CHECK(on.eval(x) == Catch::Approx(x[0]).margin(1e-12));
    }
}

TEST_CASE("filtered operator reproduces low degrees and stays in band") {
    std::mt19937 rng(906);
    for (double mu : {0.0, 0.5}) {
        BallKernelSpec spec;
        spec.n = 3;
        spec.d = 2;
        spec.mu = mu;
        BallRule rule = ball_rule(2, mu, 4 * spec.n);
        MultiPoly p = random_poly(2, 3, rng);
        MultiPoly v = vnmu_apply_poly(p, spec, rule);
        for (int rep = 0; rep < 20; ++rep) {
            Point x = random_interior(2, rng);
            CHECK(v.eval(x) == Catch::Approx(p.eval(x)).margin(1e-8));
        }
    }
    BallKernelSpec narrow;
    narrow.n = 2;
    narrow.d = 2;
    narrow.mu = 0.5;
    BallRule rule = ball_rule(2, 0.5, 24);
    MultiPoly tall = random_poly(2, 6, rng);
    CHECK(vnmu_apply_poly(tall, narrow, rule).degree() <= 2 * narrow.n);
    BallRule wrong_mu = ball_rule(2, 0.0, 24);
    CHECK_THROWS(vnmu_apply_poly(tall, narrow, wrong_mu));
    MultiPoly three = random_poly(3, 2, rng);
    CHECK_THROWS(vnmu_apply_poly(three, narrow, rule));
}

TEST_CASE("operator commutes with plane derivatives on polynomials") {
    std::mt19937 rng(907);
    for (double mu : {0.0, 0.5}) {
        BallKernelSpec spec;
        spec.n = 2;
        spec.d = 2;
        spec.mu = mu;
        BallRule rule = ball_rule(2, mu, 20);
        MultiPoly p = random_poly(2, 5, rng);
        for (int r : {1, 2}) {
            MultiPoly lhs = dij_poly_pow(vnmu_apply_poly(p, spec, rule), 0, 1, r);
            MultiPoly rhs = vnmu_apply_poly(dij_poly_pow(p, 0, 1, r), spec, rule);
            for (int rep = 0; rep < 20; ++rep) {
                Point x = random_interior(2, rng);
                CHECK(lhs.eval(x) == Catch::Approx(rhs.eval(x)).margin(1e-8));
            }
        }
    }
}

TEST_CASE("closure path agrees with the symbolic path") {
    std::mt19937 rng(908);
    for (double mu : {0.0, 0.5}) {
        BallKernelSpec spec;
        spec.n = 3;
        spec.d = 2;
        spec.mu = mu;
        BallRule rule = ball_rule(2, mu, 4 * spec.n);
        MultiPoly p = random_poly(2, 3, rng);
        FnHandle exact = vnmu_apply(handle(p), spec, rule);
        FnHandle sampled = vnmu_apply(opaque(p), spec, rule);
        CHECK(exact.is_poly());
        CHECK_FALSE(sampled.is_poly());
        for (int rep = 0; rep < 20; ++rep) {
            Point x = random_interior(2, rng);
            CHECK(sampled(x) == Catch::Approx(exact(x)).margin(1e-7));
        }
    }
}

TEST_CASE("operator agrees with its spherical lift") {
    std::mt19937 rng(909);

    // Chebyshev weight: the lift lives on the sphere one dimension up.
    {
        BallKernelSpec spec;
        spec.n = 2;
        spec.d = 2;
        spec.mu = 0.0;
        BallRule rule = ball_rule(2, 0.0, 4 * spec.n);
        MultiPoly p = random_poly(2, 3, rng);
        MultiPoly vball = vnmu_apply_poly(p, spec, rule);

        ZonalSpec up;
        up.n = spec.n;
        up.d = 3;
        MultiPoly vlift = vn_apply_poly(p.extended(3), up, sphere_rule(3, 4 * spec.n));
        for (int rep = 0; rep < 20; ++rep) {
            Point x = random_interior(2, rng);
            const double ph = phi_eval(x);
            for (double s : {1.0, -1.0}) {
                Point y{x[0], x[1], s * ph};
                CHECK(vlift.eval(y) == Catch::Approx(vball.eval(x)).margin(1e-6));
            }
        }
    }

    // Constant weight on the interval: the lift lives on S^2 and the value
    // must be constant along each circle fiber.
    {
        BallKernelSpec spec;
        spec.n = 2;
        spec.d = 1;
        spec.mu = 0.5;
        BallRule rule = ball_rule(1, 0.5, 4 * spec.n);
        MultiPoly p = random_poly(1, 3, rng);
        MultiPoly vball = vnmu_apply_poly(p, spec, rule);

        ZonalSpec up;
        up.n = spec.n;
        up.d = 3;
        MultiPoly vlift = vn_apply_poly(p.extended(3), up, sphere_rule(3, 4 * spec.n));
        std::uniform_real_distribution<double> u(-0.95, 0.95);
        for (int rep = 0; rep < 12; ++rep) {
            const double x = u(rng);
            const double ph = std::sqrt(1.0 - x * x);
            for (double psi : {0.0, 0.7, 2.1, 4.4}) {
                Point y{x, ph * std::cos(psi), ph * std::sin(psi)};
                CHECK(vlift.eval(y) == Catch::Approx(vball.eval(Point{x})).margin(1e-6));
            }
        }
    }
}

TEST_CASE("projected monomials are weighted eigenfunctions") {
    std::mt19937 rng(910);
    for (double mu : {0.0, 0.5}) {
        BallRule rule = ball_rule(2, mu, 28);
        for (int k = 1; k <= 6; ++k) {
            Exponents e{k, 0};
            if (k >= 2) e = Exponents{k - 1, 1};
            MultiPoly mono = MultiPoly::monomial(2, e, 1.0);
            MultiPoly proj = proj_degree_ball_poly(mono, k, rule);
            double scale = 0.0;
            std::vector<Point> pts;
            for (int rep = 0; rep < 40; ++rep) pts.push_back(random_interior(2, rng));
            for (const auto& x : pts) scale = std::max(scale, std::abs(proj.eval(x)));
            REQUIRE(scale > 1e-6);
            const double lam = static_cast<double>(k) * (k + 2 + 2 * mu - 1);
            MultiPoly resid = dmu_poly(proj, mu) + proj.scaled(lam);
            for (const auto& x : pts)
                CHECK(resid.eval(x) == Catch::Approx(0.0).margin(1e-6 * scale));
        }
    }
}

TEST_CASE("best error matches the frozen interval value and least squares") {
    BallRule line = ball_rule(1, 0.5, 24);
    MultiPoly x2 = MultiPoly::monomial(1, {2}, 1.0);
    BallExpansion ex = ball_expansion(handle(x2), 6, line);
    CHECK(best_l2_error_ball(ex, 1) == Catch::Approx(std::sqrt(8.0 / 45.0)).epsilon(1e-9));
    CHECK(best_l2_error_ball(ex, 1) == Catch::Approx(ls_best_error(handle(x2), 1, line)).epsilon(1e-9));
    CHECK(best_l2_error_ball(ex, 2) < 1e-7);

    std::mt19937 rng(911);
    for (double mu : {0.0, 0.5}) {
        BallRule rule = ball_rule(2, mu, 24);
        MultiPoly p = random_poly(2, 3, rng);
        BallExpansion pex = ball_expansion(handle(p), 6, rule);
        double prev = INF;
        for (int n = 0; n <= 3; ++n) {
            const double e = best_l2_error_ball(pex, n);
            CHECK(e <= prev + 1e-12);
            prev = e;
            CHECK(e == Catch::Approx(ls_best_error(handle(p), n, rule)).margin(1e-7));
        }
        CHECK(best_l2_error_ball(pex, 3) < 1e-7);

        FnHandle absf = FnHandle::from_fn(Domain::ball, 2,
            [](std::span<const double> x) { return std::abs(x[0]); });
        BallRule fine = ball_rule(2, mu, 40);
        BallExpansion aex = ball_expansion(absf, 8, fine);
        for (int n : {2, 4}) {
            CHECK(best_l2_error_ball(aex, n) ==
                  Catch::Approx(ls_best_error(absf, n, fine)).epsilon(1e-6));
        }
        CHECK(best_l2_error_ball(aex, 4) < best_l2_error_ball(aex, 2));
    }
    CHECK_THROWS(best_l2_error_ball(ex, -1));
    CHECK_THROWS(best_l2_error_ball(handle(x2), 4, line, 2));
}

TEST_CASE("expansion energies add up") {
    std::mt19937 rng(912);
    BallRule rule = ball_rule(2, 0.5, 20);
    MultiPoly p = random_poly(2, 3, rng);
    BallExpansion ex = ball_expansion(handle(p), 3, rule);
    const double n2 = lp_norm_ball(handle(p), 2.0, rule);
    CHECK(ex.f_norm_sq == Catch::Approx(n2 * n2).epsilon(1e-12));
    CHECK(ex.head(3) == Catch::Approx(ex.f_norm_sq).epsilon(1e-9));
    for (int k = 0; k <= 3; ++k) {
        MultiPoly part = proj_degree_ball_poly(p, k, rule);
        const double direct = integrate_ball(handle(part * part), rule);
        CHECK(ex.proj_norm_sq[k] == Catch::Approx(direct).margin(1e-8 * (1.0 + direct)));
    }
}

TEST_CASE("moduli vanish on constants and match interval closed forms") {
    FnHandle c2 = handle(MultiPoly::constant(2, 0.7));
    CHECK(modulus_ball(c2, 1, 0.2, 2.0, 0.5, 12) == Catch::Approx(0.0).margin(1e-12));
    CHECK(modulus_ball(c2, 2, 0.2, INF, 0.0, 12) == Catch::Approx(0.0).margin(1e-12));

    FnHandle line = handle(MultiPoly::monomial(1, {1}, 1.0));
    SupRefine ref;
    ref.enabled = true;
    for (double t : {0.3, 0.15}) {
        CHECK(modulus_ball(line, 1, t, INF, 0.0, 64, 16, ref) ==
              Catch::Approx(2.0 * std::sin(t / 2.0)).margin(1e-6));
        CHECK(modulus_ball(line, 2, t, INF, 0.0, 64, 16, ref) ==
              Catch::Approx(2.0 * (1.0 - std::cos(t))).margin(1e-6));
    }

    // linear function on the disk, constant weight: both terms have exact
    // p = 2 norms proportional to 2 sin(theta/2)
    FnHandle planar = handle(MultiPoly::monomial(2, {1, 0}, 1.0));
    BallRule disk = ball_rule(2, 0.5, 12);
    BallRule lifted = ball_rule(3, 0.0, 12);
    MultiPoly y0sq = MultiPoly::monomial(2, {2, 0}, 1.0);
    MultiPoly z0sq = MultiPoly::monomial(3, {2, 0, 0}, 1.0);
    const double i2 = integrate_ball(handle(y0sq), disk);
    const double i3 = integrate_ball(FnHandle::from_poly(Domain::ball, z0sq), lifted);
    const double t = 0.25;
    const double expect = 2.0 * std::sin(t / 2.0) * std::sqrt(std::max(i2, i3));
    CHECK(modulus_ball(planar, 1, t, 2.0, 0.5, 16) == Catch::Approx(expect).epsilon(1e-9));

    CHECK_THROWS(modulus_ball(c2, 0, 0.2, 2.0, 0.5, 12));
    CHECK_THROWS(modulus_ball(c2, 1, -0.1, 2.0, 0.5, 12));
    CHECK_THROWS(modulus_ball(c2, 1, 0.2, 2.0, 0.3, 12));
}

TEST_CASE("hat modulus follows the scaled step on linear functions") {
    FnHandle planar = handle(MultiPoly::monomial(2, {1, 0}, 1.0));
    CHECK(hat_modulus_ball(handle(MultiPoly::constant(2, 3.0)), 1, 0.2, 2.0, 12) ==
          Catch::Approx(0.0).margin(1e-12));

    // p = 2: the axis step term h phi(x) dominates the rotation term and its
    // norm is exactly h sqrt(pi/2) while every stencil stays inside
    const double t = 0.05;
    CHECK(hat_modulus_ball(planar, 1, t, 2.0, 24) ==
          Catch::Approx(t * std::sqrt(PI / 2.0)).epsilon(1e-9));

    // p = infinity: the sup of h phi is h, attained at the center
    SupRefine ref;
    ref.enabled = true;
    ref.seeds = 5;
    CHECK(hat_modulus_ball(planar, 1, 0.2, INF, 24, 16, ref) ==
          Catch::Approx(0.2).margin(2e-5));
}

TEST_CASE("k functional upper bounds track candidate quality") {
    std::mt19937 rng(913);
    MultiPoly p = MultiPoly::monomial(2, {1, 1}, 1.0) + MultiPoly::monomial(2, {3, 0}, 0.5);
    FnHandle f = handle(p);
    std::vector<int> degs{2, 4};

    auto prof = kfunc_ball_profile(f, 1, 2.0, 0.5, degs, 20);
    REQUIRE(prof.size() == 2);
    CHECK(prof[1].dist < 1e-8);  // f lies inside the degree-4 band
    CHECK(prof[1].rot > 0.0);
    CHECK(prof[1].ext > 0.0);

    // with f itself as candidate the bound is dist + t^r (rot + ext) exactly
    auto v1 = kfunc_ball_value(prof, 0.1, 1);
    auto v2 = kfunc_ball_value(prof, 0.05, 1);
    CHECK(v2.value <= v1.value + 1e-12);
    CHECK(v1.value <= prof[1].dist + 0.1 * (prof[1].rot + prof[1].ext) + 1e-12);
    CHECK(kfunc_ball_value(prof, 1e-12, 1).value ==
          Catch::Approx(std::min(prof[0].dist, prof[1].dist)).margin(1e-10));

    auto wrap = kfunc_ball_upper(f, 1, 0.1, 2.0, 0.5, degs, 20);
    CHECK(wrap.value == Catch::Approx(v1.value).epsilon(1e-12));
    CHECK((wrap.arg_degree == 2 || wrap.arg_degree == 4));

    // Chebyshev weight routes the extension term over the sphere
    std::vector<int> small{2};
    auto prof0 = kfunc_ball_profile(f, 1, 2.0, 0.0, small, 16);
    CHECK(prof0[0].ext > 0.0);
    CHECK(std::isfinite(prof0[0].dist));

    // hat profile: the phi-scaled partials of a polynomial candidate have
    // exactly computable weighted norms
    auto hat = hat_kfunc_ball_profile(f, 1, 2.0, 0.5, std::vector<int>{4}, 20);
    BallRule rule = ball_rule(2, 0.5, 20);
    MultiPoly q = one_minus_norm2(2);
    MultiPoly d0 = p.partial(0), d1 = p.partial(1);
    const double n0 = std::sqrt(integrate_ball(handle(q * d0 * d0), rule));
    const double n1 = std::sqrt(integrate_ball(handle(q * d1 * d1), rule));
    CHECK(hat[0].ext == Catch::Approx(std::max(n0, n1)).epsilon(1e-9));
    CHECK(hat[0].dist < 1e-8);

    CHECK_THROWS(kfunc_ball_profile(f, 0, 2.0, 0.5, degs, 20));
    CHECK_THROWS(kfunc_ball_profile(f, 1, 2.0, 0.3, degs, 20));
    CHECK_THROWS(kfunc_ball_profile(f, 1, 2.0, 0.5, std::vector<int>{}, 20));
    CHECK_THROWS(kfunc_ball_value(std::vector<BallKCandidate>{}, 0.1, 1));
}

TEST_CASE("sobolev norm counts each derivative once") {
    SupRefine ref;
    ref.enabled = true;
    ref.seeds = 5;
    FnHandle x1 = handle(MultiPoly::monomial(2, {0, 1}, 1.0));
    CHECK(sobolev_norm_ball(x1, 1, INF, 0.5, 24, 1e-3, ref) ==
          Catch::Approx(3.0).margin(2e-5));

    FnHandle x0sq = handle(MultiPoly::monomial(2, {2, 0}, 1.0));
    CHECK(sobolev_norm_ball(x0sq, 2, INF, 0.5, 24, 1e-3, ref) ==
          Catch::Approx(5.0).margin(2e-5));

    // p = 2 against directly integrated squares
    std::mt19937 rng(914);
    MultiPoly p = random_poly(2, 3, rng);
    BallRule rule = ball_rule(2, 0.5, 24);
    MultiPoly q = one_minus_norm2(2);
    MultiPoly rot = dij_poly_pow(p, 0, 1, 1);
    MultiPoly d0 = p.partial(0), d1 = p.partial(1);
    const double expect = std::sqrt(integrate_ball(handle(p * p), rule)) +
                          std::sqrt(integrate_ball(handle(rot * rot), rule)) +
                          std::sqrt(integrate_ball(handle(q * d0 * d0), rule)) +
                          std::sqrt(integrate_ball(handle(q * d1 * d1), rule));
    CHECK(sobolev_norm_ball(handle(p), 1, 2.0, 0.5, 24) == Catch::Approx(expect).epsilon(1e-9));

    // extension derivatives stay controlled by the sobolev norm
    for (int rep = 0; rep < 5; ++rep) {
        MultiPoly g = random_poly(2, 4, rng);
        double lhs = 0.0;
        for (int i = 0; i < 2; ++i) lhs += norm_did1(handle(g), 1, i, 2.0, 0.5, 24);
        CHECK(lhs < 10.0 * sobolev_norm_ball(handle(g), 1, 2.0, 0.5, 24));
    }
    CHECK_THROWS(sobolev_norm_ball(x1, 0, 2.0, 0.5, 12));
}

TEST_CASE("lipschitz and companion norms stay consistent") {
    FnHandle c = handle(MultiPoly::constant(2, -1.3));
    CHECK(lipschitz_norm_ball(c, 0, 0.5, 1, INF, 0.5, 12) == Catch::Approx(1.3).margin(1e-9));
    CHECK(hnorm_ball(c, 0, 0.5, 1, INF, 0.5, 12) == Catch::Approx(1.3).margin(1e-9));

    SupRefine ref;
    ref.enabled = true;
    ref.seeds = 5;
    FnHandle x0 = handle(MultiPoly::monomial(2, {1, 0}, 1.0));
    const double expect_lip = 1.0 + 4.0 * std::sin(0.5);
    CHECK(lipschitz_norm_ball(x0, 0, 0.5, 1, INF, 0.5, 20, 6, 1e-3, ref) ==
          Catch::Approx(expect_lip).margin(1e-4));
    const double expect_h = 1.0 + 2.0 * std::sin(0.5);
    CHECK(hnorm_ball(x0, 0, 0.5, 1, INF, 0.5, 20, 6, 16, ref) ==
          Catch::Approx(expect_h).margin(1e-4));

    // polynomial with genuine curvature stays finite for positive smoothness
    FnHandle x0sq = handle(MultiPoly::monomial(2, {2, 0}, 1.0));
    const double w = lipschitz_norm_ball(x0sq, 1, 0.25, 1, 2.0, 0.5, 16, 5);
    CHECK(std::isfinite(w));
    CHECK(w > 0.0);
    const double hn = hnorm_ball(x0sq, 1, 0.25, 1, 2.0, 0.5, 16, 5, 8);
    CHECK(std::isfinite(hn));
    CHECK(hn > 0.0);

    CHECK_THROWS(lipschitz_norm_ball(x0, 1, 1.0, 1, 2.0, 0.5, 12));
    CHECK_THROWS(lipschitz_norm_ball(x0, 1, 0.5, 0, 2.0, 0.5, 12));
    CHECK_THROWS(hnorm_ball(x0, 1, -0.1, 1, 2.0, 0.5, 12));
}

TEST_CASE("smoothness drop shows in the modulus decay") {
    // f(x) = (2 (1 - x_0))^0.75 has fractional smoothness 1.5 in the ball
    // scale, so the second modulus decays like t^1.5
    FnHandle falpha = FnHandle::from_fn(Domain::ball, 2, [](std::span<const double> x) {
        return std::pow(2.0 * std::max(0.0, 1.0 - x[0]), 0.75);
    });
    SupRefine ref;
    ref.enabled = true;
    std::vector<double> lt, lw;
    for (int k = 3; k <= 7; ++k) {
        const double t = std::pow(2.0, -k);
        const double w = modulus_ball(falpha, 2, t, INF, 0.5, 20, 6, ref);
        REQUIRE(w > 0.0);
        lt.push_back(std::log(t));
        lw.push_back(std::log(w));
    }
    const double slope = ls_slope(lt, lw);
    CHECK(slope > 1.3);
    CHECK(slope < 1.7);
}
