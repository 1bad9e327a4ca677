#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "polyapprox/multipoly.hpp"

using namespace polyapprox;

namespace {

MultiPoly random_poly(int dim, int deg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    MultiPoly p(dim);
    // every exponent vector with total degree <= deg
    std::vector<Exponents> all;
    Exponents e(dim, 0);
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == dim) {
            all.push_back(e);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            e[var] = k;
            self(self, var + 1, rem - k);
        }
        e[var] = 0;
    };
    rec(rec, 0, deg);
    for (const auto& ex : all) p.add_term(ex, unif(rng));
    return p;
}

std::vector<double> random_unit(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(dim);
    double n = 0.0;
    do {
        n = 0.0;
        for (auto& v : x) {
            v = g(rng);
            n += v * v;
        }
    } while (n < 1e-12);
    n = std::sqrt(n);
    for (auto& v : x) v /= n;
    return x;
}

double max_abs_diff(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly d = a - b;
    return d.max_abs_coeff();
}

// Central finite difference of order r with half-integer offsets, O(h^2).
double central_diff(const std::function<double(double)>& g, int r, double h) {
    double acc = 0.0;
    for (int k = 0; k <= r; ++k) {
        double binom = 1.0;
        for (int m = 0; m < k; ++m) binom = binom * (r - m) / (m + 1);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        acc += sgn * binom * g((r / 2.0 - k) * h);
    }
    return acc / std::pow(h, r);
}

}  // namespace

TEST_CASE("evaluation and arithmetic basics") {
    MultiPoly p(3);
    p.set({2, 0, 0}, 1.0);   // x1^2
    p.set({0, 1, 1}, -2.0);  // -2 x2 x3
    p.set({0, 0, 0}, 0.5);
    std::vector<double> x{1.0, 2.0, 3.0};
    REQUIRE(p.eval(x) == Catch::Approx(1.0 - 12.0 + 0.5));
    REQUIRE(p.degree() == 2);

    MultiPoly q = MultiPoly::variable(3, 0) * MultiPoly::variable(3, 1);
    REQUIRE(q.eval(x) == Catch::Approx(2.0));

    MultiPoly z = p - p;
    REQUIRE(z.empty());  // exact zero removal
}

TEST_CASE("prune threshold removes small coefficients") {
    MultiPoly p(2, 1e-10);
    p.add_term({1, 0}, 1e-11);
    REQUIRE(p.empty());
    p.add_term({1, 0}, 1.0);
    REQUIRE(p.term_count() == 1);
}

TEST_CASE("partial derivative and flat laplacian") {
    // p = x1^3 x2 : dp/dx1 = 3 x1^2 x2
    MultiPoly p = MultiPoly::monomial(2, {3, 1}, 1.0);
    MultiPoly dp = p.partial(0);
    REQUIRE(dp.coeff({2, 1}) == Catch::Approx(3.0));
    MultiPoly lap = laplacian_flat_poly(p);
    REQUIRE(lap.coeff({1, 1}) == Catch::Approx(6.0));
}

TEST_CASE("angular derivative on coordinates") {
    // D_{1,2} x1 = x2, D_{1,2} x2 = -x1, D_{1,2}(x1^2+x2^2) = 0
    MultiPoly x1 = MultiPoly::variable(3, 0);
    MultiPoly x2 = MultiPoly::variable(3, 1);
    REQUIRE(max_abs_diff(dij_poly(x1, 0, 1), x2) == 0.0);
    REQUIRE(max_abs_diff(dij_poly(x2, 0, 1), x1.scaled(-1.0)) == 0.0);
    REQUIRE(dij_poly(x1 * x1 + x2 * x2, 0, 1).empty());
}

TEST_CASE("angular derivative antisymmetry") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        MultiPoly p = random_poly(3, 4, rng);
        MultiPoly a = dij_poly(p, 0, 2);
        MultiPoly b = dij_poly(p, 2, 0);
        REQUIRE(max_abs_diff(a, b.scaled(-1.0)) < 1e-12);
    }
}

TEST_CASE("angular derivative Leibniz rule") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        MultiPoly p = random_poly(3, 3, rng);
        MultiPoly q = random_poly(3, 3, rng);
        MultiPoly lhs = dij_poly(p * q, 0, 1);
        MultiPoly rhs = dij_poly(p, 0, 1) * q + p * dij_poly(q, 0, 1);
        double scale = std::max(1.0, lhs.max_abs_coeff());
        REQUIRE(max_abs_diff(lhs, rhs) / scale < 1e-12);
    }
}

TEST_CASE("angular derivative ignores the radial extension") {
    // p and p*|x|^2 agree on the sphere, so their angular derivatives must too.
    std::mt19937_64 rng(13);
    MultiPoly p = random_poly(3, 3, rng);
    MultiPoly normsq(3);
    for (int v = 0; v < 3; ++v) normsq += MultiPoly::variable(3, v) * MultiPoly::variable(3, v);
    MultiPoly a = dij_poly(p, 0, 1);
    MultiPoly b = dij_poly(p * normsq, 0, 1);
    for (int trial = 0; trial < 40; ++trial) {
        auto x = random_unit(3, rng);
        REQUIRE(a.eval(x) == Catch::Approx(b.eval(x)).margin(1e-10));
    }
}

TEST_CASE("angular derivative matches rotation-flow derivative") {
    // D_{i,j}^r p (x) equals the r-th t-derivative of t -> p(Q_{i,j,-t} x) at 0.
    std::mt19937_64 rng(17);
    MultiPoly p = random_poly(3, 4, rng);
    for (int r = 1; r <= 3; ++r) {
        MultiPoly drp = dij_poly_pow(p, 0, 1, r);
        for (int trial = 0; trial < 6; ++trial) {
            auto x = random_unit(3, rng);
            auto g = [&](double t) {
                auto q = LinearMap::plane_rotation(3, 0, 1, -t);
                auto y = q.apply(x);
                return p.eval(y);
            };
            const double h = 1e-2;
            const double fd = central_diff(g, r, h);
            REQUIRE(drp.eval(x) == Catch::Approx(fd).margin(5e-3));
        }
    }
}

TEST_CASE("squared angular derivatives on quadratics") {
    // D_{1,2}(x1 x2) = x2^2 - x1^2, applied twice gives -4 x1 x2.
    MultiPoly p = MultiPoly::variable(3, 0) * MultiPoly::variable(3, 1);
    MultiPoly d2 = dij_poly_pow(p, 0, 1, 2);
    REQUIRE(max_abs_diff(d2, p.scaled(-4.0)) < 1e-14);
}

TEST_CASE("tangential Laplacian eigenvalues on explicit harmonics") {
    // x1 x2 is a degree-2 harmonic in d=3: eigenvalue -2*(2+1) = -6.
    MultiPoly h2 = MultiPoly::variable(3, 0) * MultiPoly::variable(3, 1);
    REQUIRE(max_abs_diff(laplace_beltrami_poly(h2), h2.scaled(-6.0)) < 1e-13);
    // x1 is degree-1: eigenvalue -1*(1+1) = -2.
    MultiPoly h1 = MultiPoly::variable(3, 0);
    REQUIRE(max_abs_diff(laplace_beltrami_poly(h1), h1.scaled(-2.0)) < 1e-14);
    // d=4: x1 x2 has eigenvalue -2*(2+2) = -8.
    MultiPoly g2 = MultiPoly::variable(4, 0) * MultiPoly::variable(4, 1);
    REQUIRE(max_abs_diff(laplace_beltrami_poly(g2), g2.scaled(-8.0)) < 1e-13);
}

TEST_CASE("tangential Laplacian via flat Laplacian and Euler degree") {
    // On homogeneous p of degree n: sum_{i<j} D_{i,j}^2 p = |x|^2 lap p - n(n+d-2) p.
    std::mt19937_64 rng(23);
    for (int d = 2; d <= 3; ++d) {
        MultiPoly normsq(d);
        for (int v = 0; v < d; ++v) normsq += MultiPoly::variable(d, v) * MultiPoly::variable(d, v);
        for (int n = 1; n <= 8; ++n) {
            // a random homogeneous polynomial of degree n
            MultiPoly p(d);
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            Exponents e(d, 0);
            for (int k = 0; k <= n; ++k) {
                if (d == 2) {
                    e[0] = k;
                    e[1] = n - k;
                    p.add_term(e, unif(rng));
                } else {
                    for (int l = 0; l + k <= n; ++l) {
                        e[0] = k;
                        e[1] = l;
                        e[2] = n - k - l;
                        p.add_term(e, unif(rng));
                    }
                }
            }
            MultiPoly lhs = laplace_beltrami_poly(p);
            MultiPoly rhs = normsq * laplacian_flat_poly(p) - p.scaled(double(n) * (n + d - 2));
            double scale = std::max(1.0, p.max_abs_coeff());
            REQUIRE(max_abs_diff(lhs, rhs) / scale < 1e-10);
        }
    }
}

TEST_CASE("weighted operator on simple inputs") {
    // D_mu x1 = -(d + 2 mu) x1; with d=2, mu=1/2: -3 x1.
    MultiPoly x1 = MultiPoly::variable(2, 0);
    REQUIRE(max_abs_diff(dmu_poly(x1, 0.5), x1.scaled(-3.0)) < 1e-14);
    // axis term on x1: (1-|x|^2)*0 - (2 mu + 1) x1
    REQUIRE(max_abs_diff(dii_sq_poly(x1, 0, 0.5), x1.scaled(-2.0)) < 1e-14);
    REQUIRE(max_abs_diff(dii_sq_poly(x1, 0, 0.0), x1.scaled(-1.0)) < 1e-14);
}

TEST_CASE("weighted operator decomposition") {
    // D_mu = sum_i Dii^2 + sum_{i<j} D_{i,j}^2, coefficientwise.
    std::mt19937_64 rng(29);
    for (double mu : {0.0, 0.5, 1.5}) {
        for (int d = 2; d <= 3; ++d) {
            MultiPoly p = random_poly(d, 5, rng);
            MultiPoly lhs = dmu_poly(p, mu);
            MultiPoly rhs(d);
            for (int i = 0; i < d; ++i) rhs += dii_sq_poly(p, i, mu);
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) rhs += dij_poly_pow(p, i, j, 2);
            double scale = std::max(1.0, p.max_abs_coeff());
            REQUIRE(max_abs_diff(lhs, rhs) / scale < 1e-12);
        }
    }
}

TEST_CASE("composition with a linear map") {
    MultiPoly p = MultiPoly::variable(2, 0);  // x1
    auto q = LinearMap::plane_rotation(2, 0, 1, M_PI / 2.0);
    // (p o Q)(x) = (Qx)_1 = x1 cos - x2 sin = -x2
    MultiPoly pc = rot_compose(p, q);
    REQUIRE(pc.coeff({0, 1}) == Catch::Approx(-1.0));
    REQUIRE(std::abs(pc.coeff({1, 0})) < 1e-15);

    // rotation invariance of x1^2 + x2^2
    MultiPoly inv = MultiPoly::variable(2, 0) * MultiPoly::variable(2, 0) +
                    MultiPoly::variable(2, 1) * MultiPoly::variable(2, 1);
    MultiPoly invc = rot_compose(inv, LinearMap::plane_rotation(2, 0, 1, 0.7));
    REQUIRE(max_abs_diff(inv, invc) < 1e-14);

    // identity map
    MultiPoly r = rot_compose(p, LinearMap::identity(2));
    REQUIRE(max_abs_diff(r, p) == 0.0);
}

TEST_CASE("rotation orientation is e_i toward e_j") {
    auto q = LinearMap::plane_rotation(3, 0, 1, M_PI / 2.0);
    std::vector<double> e1{1.0, 0.0, 0.0};
    auto y = q.apply(e1);
    REQUIRE(y[0] == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(y[1] == Catch::Approx(1.0));
}

TEST_CASE("usage errors are rejected") {
    MultiPoly p = MultiPoly::variable(3, 0);
    REQUIRE_THROWS_AS(dij_poly(p, 1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(dij_poly(p, 0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(dii_sq_poly(p, 5, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(dmu_poly(p, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(MultiPoly::variable(3, 0).eval(std::vector<double>{1.0}), std::invalid_argument);
}
