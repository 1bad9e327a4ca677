#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polyapprox/multipoly.hpp"
#include "polyapprox/sphere.hpp"
#include "polyapprox/sphere_approx.hpp"

using namespace polyapprox;
using std::numbers::pi;

namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

MultiPoly random_poly(int dim, int deg, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    MultiPoly p = MultiPoly::constant(dim, U(rng));
    std::vector<int> e(dim, 0);
    std::function<void(int, int)> walk = [&](int pos, int left) {
        if (pos == dim) {
            p.add_term(e, U(rng) / 3.0);
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

Point random_unit(int dim, std::mt19937& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Point x(dim);
    double n = 0.0;
    do {
        n = 0.0;
        for (auto& v : x) {
            v = N(rng);
            n += v * v;
        }
    } while (n < 1e-12);
    n = std::sqrt(n);
    for (auto& v : x) v /= n;
    return x;
}

FnHandle handle(const MultiPoly& p) { return FnHandle::from_poly(Domain::sphere, p, "p"); }

FnHandle abs_x2() {
    return FnHandle::from_fn(Domain::sphere, 3,
                             [](std::span<const double> x) { return std::abs(x[2]); }, "absx2");
}

double max_node_diff(const FnHandle& a, const FnHandle& b, const SphereRule& rule) {
    double m = 0.0;
    for (const auto& x : rule.points) m = std::max(m, std::abs(a(x) - b(x)));
    return m;
}

}  // namespace

TEST_CASE("zonal kernel values") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        double t = U(rng);
        CHECK(std::abs(zonal_eval(1, 3, t) - 3.0 * t) < 1e-14);
        CHECK(std::abs(zonal_eval(0, 3, t) - 1.0) < 1e-14);
        // d=2 Chebyshev limit
        for (int n : {1, 2, 5}) {
            CHECK(std::abs(zonal_eval(n, 2, t) - 2.0 * std::cos(n * std::acos(t))) < 1e-12);
        }
    }
    for (int n : {0, 1, 2, 5, 9}) {
        CHECK(std::abs(zonal_eval(n, 3, 1.0) - (2.0 * n + 1.0)) < 1e-10);
        // d=4: lambda=1, Z_n(1) = (n+1)^2
        CHECK(std::abs(zonal_eval(n, 4, 1.0) - (n + 1.0) * (n + 1.0)) < 1e-9);
    }
}

TEST_CASE("zonal coefficient vectors match recurrence values") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (double lambda : {0.0, 0.5, 1.0}) {
        for (int k = 0; k <= 10; ++k) {
            auto c = zonal_coeffs(k, lambda);
            REQUIRE(c.size() == static_cast<size_t>(k + 1));
            std::vector<double> z(k + 1);
            for (int trial = 0; trial < 3; ++trial) {
                double t = U(rng);
                zonal_all(k, lambda, t, z);
                double horner = 0.0;
                for (int m = k; m >= 0; --m) horner = horner * t + c[m];
                CHECK(std::abs(horner - z[k]) < 1e-9 * (1.0 + std::abs(z[k])));
            }
        }
    }
}

TEST_CASE("degree projection reproduces harmonics and kills cross terms") {
    auto rule = sphere_rule(3, 8);
    auto f = handle(MultiPoly::monomial(3, {1, 1, 0}, 1.0));  // x0 x1, a degree-2 harmonic
    auto p2 = project_degree(f, 2, rule);
    auto p1 = project_degree(f, 1, rule);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(p2(x) - x[0] * x[1]) < 1e-9);
        CHECK(std::abs(p1(x)) < 1e-9);
    }
    auto one = handle(MultiPoly::constant(3, 1.0));
    auto p0 = project_degree(one, 0, rule);
    CHECK(std::abs(p0(rule.points[0]) - 1.0) < 1e-12);
}

TEST_CASE("polynomial projection is exact, idempotent, and an eigenfunction") {
    auto rule = sphere_rule(3, 14);
    auto xy = MultiPoly::monomial(3, {1, 1, 0}, 1.0);
    auto proj2 = project_degree_poly(xy, 2, rule);
    CHECK((proj2 - xy).max_abs_coeff() < 1e-12);
    CHECK(project_degree_poly(xy, 1, rule).max_abs_coeff() < 1e-12);

    std::mt19937 rng(17);
    auto p = random_poly(3, 4, rng);
    // partial sums recover p on the sphere (as functions, not coefficients)
    MultiPoly sum = MultiPoly::constant(3, 0.0);
    for (int k = 0; k <= 4; ++k) sum = sum + project_degree_poly(p, k, rule);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(poly_eval(sum, x) - poly_eval(p, x)) < 1e-10);
    }
    // eigen identity of the angular Laplacian on each component, nodewise
    for (int k = 1; k <= 4; ++k) {
        auto comp = project_degree_poly(p, k, rule);
        auto lb = laplace_beltrami_poly(comp);
        double scale = 0.0;
        for (const auto& x : rule.points) scale = std::max(scale, std::abs(poly_eval(comp, x)));
        if (scale < 1e-14) continue;
        for (const auto& x : rule.points) {
            double resid = poly_eval(lb, x) + k * (k + 1.0) * poly_eval(comp, x);
            CHECK(std::abs(resid) < 1e-8 * scale);
        }
        // idempotence holds as sphere functions (representatives may differ
        // off the sphere by multiples of 1 - |x|^2)
        auto again = project_degree_poly(comp, k, sphere_rule(3, 2 * k + 2));
        for (const auto& x : rule.points)
            CHECK(std::abs(poly_eval(again, x) - poly_eval(comp, x)) < 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("expansion satisfies Parseval on polynomials") {
    std::mt19937 rng(23);
    auto p = random_poly(3, 5, rng);
    auto rule = sphere_rule(3, 12);
    auto ex = harmonic_expansion(handle(p), 5, rule);
    double sum = 0.0;
    for (double v : ex.proj_norm_sq) sum += v;
    CHECK(std::abs(sum - ex.f_norm_sq) < 1e-8 * ex.f_norm_sq);
    CHECK(std::abs(ex.tail()) < 1e-8 * ex.f_norm_sq);
    // non-polynomial: mass never exceeds the norm
    auto ex2 = harmonic_expansion(abs_x2(), 16, sphere_rule(3, 48));
    double sum2 = 0.0;
    for (double v : ex2.proj_norm_sq) sum2 += v;
    CHECK(sum2 <= ex2.f_norm_sq * (1.0 + 1e-8));
    CHECK(ex2.tail() >= -1e-8 * ex2.f_norm_sq);
}

TEST_CASE("best L2 error closed forms") {
    auto rule = sphere_rule(3, 12);
    auto f = handle(MultiPoly::monomial(3, {2, 0, 0}, 1.0));
    CHECK(std::abs(best_l2_error(f, 1, rule, 4) - std::sqrt(16.0 * pi / 45.0)) < 1e-10);
    CHECK(best_l2_error(f, 3, rule, 6) < 1e-7);
    auto g = handle(MultiPoly::monomial(3, {1, 1, 0}, 1.0));
    CHECK(best_l2_error(g, 3, rule, 6) < 1e-7);
    // monotone decrease on a non-polynomial
    auto ex = harmonic_expansion(abs_x2(), 12, sphere_rule(3, 36));
    double prev = best_l2_error(ex, 1);
    for (int n = 2; n <= 8; ++n) {
        double cur = best_l2_error(ex, n);
        CHECK(cur <= prev * (1.0 + 1e-12));
        prev = cur;
    }
}

TEST_CASE("filtered operator reproduces low degrees") {
    for (int n : {1, 2, 4}) {
        auto rule = sphere_rule(3, 2 * n + 2);
        ZonalSpec spec{n, 3, {}};
        auto f = handle(MultiPoly::variable(3, 0));
        auto vf = vn_apply(f, spec, rule);
        CHECK(max_node_diff(vf, f, rule) < 1e-8);
        auto one = handle(MultiPoly::constant(3, 1.0));
        CHECK(max_node_diff(vn_apply(one, spec, rule), one, rule) < 1e-12);
    }
    // full reproduction across monomials of degree <= n
    int n = 4;
    auto rule = sphere_rule(3, 2 * n + 4);
    ZonalSpec spec{n, 3, {}};
    std::vector<Exponents> exps = {{4, 0, 0}, {2, 1, 1}, {1, 3, 0}, {0, 2, 2}};
    for (const auto& e : exps) {
        auto f = handle(MultiPoly::monomial(3, e, 1.0));
        CHECK(max_node_diff(vn_apply(f, spec, rule), f, rule) < 1e-8);
    }
}

TEST_CASE("filtered operator damps the filtered band explicitly") {
    // f = x0 x1 x2 is a pure degree-3 harmonic, so V_2 f = eta(3/2) f
    auto f = handle(MultiPoly::monomial(3, {1, 1, 1}, 1.0));
    auto rule = sphere_rule(3, 10);
    ZonalSpec spec{2, 3, {}};
    auto vf = vn_apply(f, spec, rule);
    const double damp = eta_eval(spec.eta, 1.5);
    CHECK(damp > 0.0);
    CHECK(damp < 1.0);
    std::mt19937 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(vf(x) - damp * f(x)) < 1e-10);
    }
    // near-best bound: ||f - V_2 f||_2 = (1 - eta(3/2)) ||f||_2 <= 1 * E_2(f)_2
    double dist = lp_norm_sphere(fn_sub(f, vf), 2.0, rule);
    double e2 = best_l2_error(f, 2, rule, 6);
    CHECK(dist <= e2 * (1.0 + 1e-10));
    CHECK(std::abs(dist - (1.0 - damp) * e2) < 1e-10);
    // the quadrature candidate is at least the best error of its own degree band
    CHECK(en_upper(f, 2, 2.0, rule) >= best_l2_error(f, 5, rule, 6) - 1e-12);
}

TEST_CASE("quadrature and symbolic paths of the operator agree") {
    std::mt19937 rng(37);
    auto p = random_poly(3, 4, rng);
    int n = 3;
    auto rule = sphere_rule(3, 2 * n + 4);
    ZonalSpec spec{n, 3, {}};
    auto sym = vn_apply(handle(p), spec, rule);
    REQUIRE(sym.is_poly());
    auto quad = vn_apply(FnHandle::from_fn(Domain::sphere, 3,
                                           [&p](std::span<const double> x) { return poly_eval(p, x); },
                                           "generic"),
                         spec, rule);
    REQUIRE(!quad.is_poly());
    for (int trial = 0; trial < 8; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(sym(x) - quad(x)) < 1e-10);
    }
}

TEST_CASE("operator commutes with angular derivatives on polynomials") {
    std::mt19937 rng(41);
    for (int n : {4, 8}) {
        auto rule = sphere_rule(3, 2 * n + 8);
        ZonalSpec spec{n, 3, {}};
        auto p = random_poly(3, 6, rng);
        auto vp = vn_apply_poly(p, spec, rule);
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                auto left = dij_poly(vp, i, j);
                auto right = vn_apply_poly(dij_poly(p, i, j), spec, rule);
                auto diff = left - right;
                for (const auto& x : rule.points) CHECK(std::abs(poly_eval(diff, x)) < 1e-7);
            }
        }
    }
}

TEST_CASE("kernel-derivative route equals the symbolic derivative") {
    std::mt19937 rng(43);
    auto p = random_poly(3, 3, rng);
    int n = 3;
    auto rule = sphere_rule(3, 2 * n + 6);
    ZonalSpec spec{n, 3, {}};
    auto vp = vn_apply_poly(p, spec, rule);
    auto fgen = FnHandle::from_fn(Domain::sphere, 3,
                                  [&p](std::span<const double> x) { return poly_eval(p, x); }, "g");
    for (int r : {1, 2}) {
        auto dv = vn_dij_apply(fgen, spec, rule, r, 0, 2);
        auto exact = dij_poly_pow(vp, 0, 2, r);
        for (int trial = 0; trial < 6; ++trial) {
            auto x = random_unit(3, rng);
            CHECK(std::abs(dv(x) - poly_eval(exact, x)) < 1e-8);
        }
    }
    // generic smooth function: compare against central differences
    auto bump = FnHandle::from_fn(Domain::sphere, 3, [](std::span<const double> x) {
        return std::exp(x[0] + 0.5 * x[1]);
    }, "bump");
    auto dv = vn_dij_apply(bump, spec, rule, 1, 0, 1);
    auto vb = vn_apply(bump, spec, rule);
    for (int trial = 0; trial < 3; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(dv(x) - dij_num(vb, 1, 0, 1, x, 1e-4)) < 1e-6);
    }
}

TEST_CASE("modulus of smoothness basics") {
    auto rule = sphere_rule(3, 20);
    auto c = handle(MultiPoly::constant(3, 4.2));
    CHECK(modulus_sphere(c, 1, 0.5, 2.0, rule) < 1e-13);
    // omega_1(x0, t)_inf = 2 sin(t/2), attained in the rotation planes through e0
    SupRefine ref;
    ref.enabled = true;
    auto f = handle(MultiPoly::variable(3, 0));
    double t = 0.3;
    double w = modulus_sphere(f, 1, t, INF, rule, 16, ref);
    CHECK(std::abs(w - 2.0 * std::sin(t / 2.0)) < 1e-6);
    // monotone in t via nested grids
    double w2 = modulus_sphere(f, 1, 2.0 * t, INF, rule, 16, ref);
    CHECK(w <= w2 * (1.0 + 1e-12));
}

TEST_CASE("K-functional upper bound behaves like the modulus") {
    auto rule = sphere_rule(3, 24);
    std::vector<int> degrees = {1, 2, 4, 8, 16};
    // polynomial already in the candidate set: distance term vanishes
    auto p = handle(MultiPoly::variable(3, 0));
    auto res = kfunc_sphere_upper(p, 1, 0.25, 2.0, rule, degrees);
    // candidate V_1 x0 = x0, so value = t * max_{ij} ||D_{ij} x0||_2
    double dmax = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            dmax = std::max(dmax, lp_norm_sphere(handle(dij_poly(*p.poly, i, j)), 2.0, rule));
    CHECK(res.value <= 0.25 * dmax + 1e-6);
    CHECK(res.value > 0.0);
    // t = 0 -> pure distance, zero for reproducible polynomials
    CHECK(kfunc_sphere_upper(p, 1, 0.0, 2.0, rule, degrees).value < 1e-8);
    // |x2|: K upper bound and modulus stay within a moderate band
    auto f = abs_x2();
    double t = 1.0 / 8.0;
    double kv = kfunc_sphere_upper(f, 1, t, INF, rule, degrees).value;
    double mod = modulus_sphere(f, 1, t, INF, rule);
    CHECK(kv > 0.0);
    CHECK(mod > 0.0);
    double ratio = kv / mod;
    CHECK(ratio > 0.02);
    CHECK(ratio < 50.0);
}

TEST_CASE("spectral multiplier acts by eigenvalues") {
    auto rule = sphere_rule(3, 14);
    std::mt19937 rng(53);
    auto p = random_poly(3, 3, rng);
    auto comp = project_degree_poly(p, 3, rule);  // degree-3 spherical harmonic
    double scale = 0.0;
    for (const auto& x : rule.points) scale = std::max(scale, std::abs(poly_eval(comp, x)));
    REQUIRE(scale > 1e-10);
    auto lap = frac_laplacian_l2(handle(comp), 1.0, 6, rule);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(lap(x) - 12.0 * poly_eval(comp, x)) < 1e-8 * scale);
    }
    auto x0 = handle(MultiPoly::variable(3, 0));
    auto half = frac_laplacian_l2(x0, 0.5, 4, rule);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_unit(3, rng);
        CHECK(std::abs(half(x) - std::sqrt(2.0) * x[0]) < 1e-10);
    }
    auto c = handle(MultiPoly::constant(3, 2.0));
    auto lc = frac_laplacian_l2(c, 1.0, 4, rule);
    CHECK(std::abs(lc(rule.points[0])) < 1e-12);
}

TEST_CASE("smoothness norms reach their closed forms") {
    auto rule = sphere_rule(3, 24);
    SupRefine ref;
    ref.enabled = true;
    auto c = handle(MultiPoly::constant(3, -1.5));
    CHECK(std::abs(sobolev_norm_sphere(c, 2, 2.0, rule) - lp_norm_sphere(c, 2.0, rule)) < 1e-12);
    auto f = handle(MultiPoly::variable(3, 0));
    CHECK(std::abs(sobolev_norm_sphere(f, 1, INF, rule, 1e-3, ref) - 3.0) < 1e-6);
    // polynomial and numeric handles agree
    auto fgen = FnHandle::from_fn(Domain::sphere, 3,
                                  [](std::span<const double> x) { return x[0]; }, "x0gen");
    CHECK(std::abs(sobolev_norm_sphere(f, 1, 2.0, rule) -
                   sobolev_norm_sphere(fgen, 1, 2.0, rule)) < 1e-6);
}

TEST_CASE("Lipschitz-type norms are finite and consistent") {
    auto rule = sphere_rule(3, 16);
    auto c = handle(MultiPoly::constant(3, 2.0));
    CHECK(std::abs(lipschitz_norm_sphere(c, 1, 0.5, 1, 2.0, rule) - lp_norm_sphere(c, 2.0, rule)) < 1e-12);
    CHECK(std::abs(hnorm_sphere(c, 1, 0.5, 1, 2.0, rule) - lp_norm_sphere(c, 2.0, rule)) < 1e-12);
    std::mt19937 rng(59);
    auto f = handle(random_poly(3, 2, rng));
    double lip = lipschitz_norm_sphere(f, 1, 0.0, 1, 2.0, rule, 6);
    CHECK(std::isfinite(lip));
    CHECK(lip >= lp_norm_sphere(f, 2.0, rule));
    double hn = hnorm_sphere(f, 1, 0.5, 1, 2.0, rule, 6, 8);
    CHECK(std::isfinite(hn));
    // |x2| with r=0: omega_1 ~ t so the alpha=1/2 quotient stays bounded
    double habs = hnorm_sphere(abs_x2(), 0, 0.5, 1, 2.0, rule, 6, 8);
    CHECK(std::isfinite(habs));
    CHECK(habs < 100.0);
}
