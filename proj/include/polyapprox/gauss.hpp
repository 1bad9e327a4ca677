#pragma once

// Gauss quadrature on [-1, 1] for the Legendre and Jacobi weights, built by
// the Golub-Welsch method on the symmetric tridiagonal recurrence matrix.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyapprox {

enum class GaussKind { legendre, jacobi };

struct GaussRule1D {
    GaussKind kind = GaussKind::legendre;
    double a = 0.0;  // Jacobi exponent on (1-x)
    double b = 0.0;  // Jacobi exponent on (1+x)
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;  // positive
    int exactness = 0;            // exact for polynomial degree <= exactness
    double mass = 0.0;            // integral of the weight over [-1, 1]
};

namespace detail {

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method,
/// simultaneously applying the rotations to a vector z. Classic Golub-Welsch
/// workhorse: on exit d holds ascending eigenvalues and z the first
/// components of the normalized eigenvectors scaled by the input z.
inline void imtqlx(int n, std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const double eps = 2.220446049250313e-16;
    const int max_it = 40;
    if (n == 1) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m)
                if (std::abs(e[m]) <= eps * (std::abs(d[m]) + std::abs(d[m + 1]))) break;
            if (m == l) break;
            if (++iter > max_it) throw std::runtime_error("imtqlx: QL iteration failed to converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double bb = c * e[i];
                if (std::abs(f) >= std::abs(g)) {
                    c = g / f;
                    r = std::hypot(c, 1.0);
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = std::hypot(s, 1.0);
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // insertion sort ascending, carrying z
    for (int i = 1; i < n; ++i) {
        double dk = d[i], zk = z[i];
        int j = i - 1;
        while (j >= 0 && d[j] > dk) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
            --j;
        }
        d[j + 1] = dk;
        z[j + 1] = zk;
    }
}

inline double log_beta(double x, double y) {
    return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

}  // namespace detail

/// Total mass of the Jacobi weight (1-x)^a (1+x)^b over [-1, 1].
inline double jacobi_mass(double a, double b) {
    return std::exp((a + b + 1.0) * std::log(2.0) + detail::log_beta(a + 1.0, b + 1.0));
}

inline GaussRule1D gauss_rule(GaussKind kind, int npts, double a = 0.0, double b = 0.0) {
    if (npts < 1) throw std::invalid_argument("gauss_rule: need at least one node");
    if (kind == GaussKind::legendre) {
        a = 0.0;
        b = 0.0;
    } else if (a <= -1.0 || b <= -1.0) {
        throw std::invalid_argument("gauss_rule: Jacobi exponents must exceed -1");
    }
    GaussRule1D rule;
    rule.kind = kind;
    rule.a = a;
    rule.b = b;
    rule.mass = jacobi_mass(a, b);
    rule.exactness = 2 * npts - 1;

    std::vector<double> diag(npts), sub(npts, 0.0), z(npts, 0.0);
    const double ab = a + b;
    diag[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < npts; ++k) {
        const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag[k] = (b * b - a * a) / den;
    }
    for (int k = 1; k < npts; ++k) {
        double beta;
        if (k == 1) {
            beta = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            const double q = 2.0 * k + ab;
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (q * q * (q + 1.0) * (q - 1.0));
        }
        sub[k - 1] = std::sqrt(beta);
    }
    z[0] = 1.0;
    detail::imtqlx(npts, diag, sub, z);

    rule.nodes = std::move(diag);
    rule.weights.resize(npts);
    for (int k = 0; k < npts; ++k) rule.weights[k] = rule.mass * z[k] * z[k];
    return rule;
}

/// Convenience: the same rule affinely mapped to [0, 1]; weights keep the
/// measure of (1-u)^a u^b du (note the roles: node u = (1+x)/2).
inline GaussRule1D gauss_rule_unit(GaussKind kind, int npts, double a = 0.0, double b = 0.0) {
    GaussRule1D r = gauss_rule(kind, npts, a, b);
    const double scale = std::pow(2.0, -(a + b + 1.0));
    for (auto& x : r.nodes) x = 0.5 * (x + 1.0);
    for (auto& w : r.weights) w *= scale;
    r.mass *= scale;
    return r;
}

}  // namespace polyapprox
