#pragma once

// Gegenbauer (ultraspherical) polynomials, the normalized zonal combinations
// used by projection kernels, and the smooth cutoff that shapes delayed-mean
// kernels. The parameter lambda = 0 is the Chebyshev limit: the raw
// polynomials collapse to zero for n >= 1, while the normalized zonal
// combination tends to 2 T_n.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace polyapprox {

struct GegenbauerParam {
    double lambda = 0.5;
    bool chebyshev_limit() const { return lambda == 0.0; }
};

inline void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("gegenbauer: lambda must be >= 0");
}

/// Values C_k^lambda(t) for k = 0..nmax by the three-term recurrence
///   k C_k = 2 (k + lambda - 1) t C_{k-1} - (k + 2 lambda - 2) C_{k-2}.
inline void gegenbauer_all(int nmax, double lambda, double t, std::span<double> out) {
    check_lambda(lambda);
    if (static_cast<int>(out.size()) < nmax + 1)
        throw std::invalid_argument("gegenbauer_all: output too small");
    out[0] = 1.0;
    if (nmax == 0) return;
    out[1] = 2.0 * lambda * t;
    for (int k = 2; k <= nmax; ++k)
        out[k] = (2.0 * (k + lambda - 1.0) * t * out[k - 1] - (k + 2.0 * lambda - 2.0) * out[k - 2]) / k;
}

inline double gegenbauer_eval(int n, double lambda, double t) {
    if (n < 0) throw std::invalid_argument("gegenbauer_eval: negative degree");
    std::vector<double> buf(n + 1);
    gegenbauer_all(n, lambda, t, buf);
    return buf[n];
}

/// C_n^lambda(1) = Gamma(n + 2 lambda) / (Gamma(2 lambda) n!). Zero for
/// n >= 1 in the Chebyshev limit.
inline double gegenbauer_at_one(int n, double lambda) {
    check_lambda(lambda);
    if (n == 0) return 1.0;
    if (lambda == 0.0) return 0.0;
    return std::exp(std::lgamma(n + 2.0 * lambda) - std::lgamma(2.0 * lambda) - std::lgamma(n + 1.0));
}

/// Zonal values Z_k(t) = ((k + lambda)/lambda) C_k^lambda(t) for k = 0..nmax,
/// with the lambda = 0 limit Z_0 = 1, Z_k = 2 T_k.
inline void zonal_all(int nmax, double lambda, double t, std::span<double> out) {
    check_lambda(lambda);
    if (static_cast<int>(out.size()) < nmax + 1)
        throw std::invalid_argument("zonal_all: output too small");
    if (lambda == 0.0) {
        out[0] = 1.0;
        if (nmax == 0) return;
        // Chebyshev recurrence on T_k
        double tm2 = 1.0, tm1 = t;
        out[1] = 2.0 * tm1;
        for (int k = 2; k <= nmax; ++k) {
            double tk = 2.0 * t * tm1 - tm2;
            out[k] = 2.0 * tk;
            tm2 = tm1;
            tm1 = tk;
        }
        return;
    }
    gegenbauer_all(nmax, lambda, t, out);
    for (int k = 0; k <= nmax; ++k) out[k] *= (k + lambda) / lambda;
}

/// m-th derivative values Z_k^{(m)}(t) for k = 0..nmax and m = 1..max_order.
/// Uses d/dt C_k^nu = 2 nu C_{k-1}^{nu+1}, which stays valid as nu -> 0 after
/// zonal normalization:
///   Z_k^{(m)} = 2^m (k + lambda) (lambda+1)...(lambda+m-1) C_{k-m}^{lambda+m}.
inline void zonal_derivs(int nmax, double lambda, double t, int max_order,
                         std::vector<std::vector<double>>& out) {
    check_lambda(lambda);
    if (max_order < 0) throw std::invalid_argument("zonal_derivs: bad order");
    out.assign(max_order + 1, std::vector<double>(nmax + 1, 0.0));
    zonal_all(nmax, lambda, t, out[0]);
    std::vector<double> buf(nmax + 1);
    for (int m = 1; m <= max_order; ++m) {
        double factor = std::pow(2.0, m);
        for (int j = 1; j < m; ++j) factor *= lambda + j;
        if (nmax >= m) gegenbauer_all(nmax - m, lambda + m, t, buf);
        for (int k = m; k <= nmax; ++k) out[m][k] = factor * (k + lambda) * buf[k - m];
    }
}

/// Smooth cutoff equal to 1 on [0, inner], 0 on [outer, inf), with the
/// canonical exp(-1/u) blend in between.
struct CutoffEta {
    double inner = 1.0;
    double outer = 2.0;
};

inline double eta_eval(const CutoffEta& eta, double x) {
    if (!(eta.inner < eta.outer)) throw std::invalid_argument("eta_eval: need inner < outer");
    if (x <= eta.inner) return 1.0;
    if (x >= eta.outer) return 0.0;
    auto h = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
    const double hi = h((eta.outer - x) / (eta.outer - eta.inner));
    const double lo = h((x - eta.inner) / (eta.outer - eta.inner));
    return hi / (hi + lo);
}

/// Delayed-mean kernel value K_n(t) = sum_{k=0}^{2n} eta(k/n) Z_k(t).
inline double kernel_kn(int n, double lambda, const CutoffEta& eta, double t) {
    if (n < 1) throw std::invalid_argument("kernel_kn: n must be >= 1");
    std::vector<double> z(2 * n + 1);
    zonal_all(2 * n, lambda, t, z);
    double acc = 0.0;
    for (int k = 0; k <= 2 * n; ++k) acc += eta_eval(eta, double(k) / n) * z[k];
    return acc;
}

/// Kernel derivative values G^{(m)}(t) = sum_k eta(k/n) Z_k^{(m)}(t) for
/// m = 0..max_order, shared by exact differentiation of kernel operators.
inline std::vector<double> kernel_kn_derivs(int n, double lambda, const CutoffEta& eta, double t,
                                            int max_order) {
    if (n < 1) throw std::invalid_argument("kernel_kn_derivs: n must be >= 1");
    std::vector<std::vector<double>> z;
    zonal_derivs(2 * n, lambda, t, max_order, z);
    std::vector<double> acc(max_order + 1, 0.0);
    for (int m = 0; m <= max_order; ++m)
        for (int k = 0; k <= 2 * n; ++k) acc[m] += eta_eval(eta, double(k) / n) * z[m][k];
    return acc;
}

}  // namespace polyapprox
