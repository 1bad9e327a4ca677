#pragma once

// Dense multivariate polynomials over a fixed number of variables, stored as
// a map from exponent multi-indices to real coefficients, plus the angular
// and weighted differential operators built from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyapprox {

using Exponents = std::vector<int>;

/// Square linear map on R^d, row-major.
struct LinearMap {
    int dim = 0;
    std::vector<double> m;  // dim*dim entries, m[r*dim+c]

    static LinearMap identity(int d) {
        LinearMap q;
        q.dim = d;
        q.m.assign(static_cast<size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) q.m[static_cast<size_t>(i) * d + i] = 1.0;
        return q;
    }

    /// Plane rotation sending e_i toward e_j by angle theta:
    /// y_i = x_i cos t - x_j sin t, y_j = x_i sin t + x_j cos t.
    static LinearMap plane_rotation(int d, int i, int j, double theta) {
        if (i < 0 || j < 0 || i >= d || j >= d || i == j)
            throw std::invalid_argument("plane_rotation: bad axis pair");
        LinearMap q = identity(d);
        const double c = std::cos(theta), s = std::sin(theta);
        q.m[static_cast<size_t>(i) * d + i] = c;
        q.m[static_cast<size_t>(i) * d + j] = -s;
        q.m[static_cast<size_t>(j) * d + i] = s;
        q.m[static_cast<size_t>(j) * d + j] = c;
        return q;
    }

    std::vector<double> apply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim)
            throw std::invalid_argument("LinearMap::apply: dimension mismatch");
        std::vector<double> y(dim, 0.0);
        for (int r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (int c = 0; c < dim; ++c) acc += m[static_cast<size_t>(r) * dim + c] * x[c];
            y[r] = acc;
        }
        return y;
    }
};

/// Real polynomial in `dim` variables. Exact zero coefficients (and entries
/// below the prune threshold) are never stored.
class MultiPoly {
  public:
    MultiPoly() = default;
    explicit MultiPoly(int dim, double prune = 0.0) : dim_(dim), prune_(prune) {
        if (dim <= 0) throw std::invalid_argument("MultiPoly: dim must be positive");
    }

    static MultiPoly constant(int dim, double c) {
        MultiPoly p(dim);
        p.set(Exponents(dim, 0), c);
        return p;
    }

    static MultiPoly variable(int dim, int i) {
        if (i < 0 || i >= dim) throw std::invalid_argument("MultiPoly::variable: index out of range");
        MultiPoly p(dim);
        Exponents e(dim, 0);
        e[i] = 1;
        p.set(e, 1.0);
        return p;
    }

    static MultiPoly monomial(int dim, const Exponents& e, double c) {
        MultiPoly p(dim);
        p.set(e, c);
        return p;
    }

    int dim() const { return dim_; }
    double prune_threshold() const { return prune_; }
    bool empty() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, double>& terms() const { return terms_; }

    int degree() const {
        int deg = 0;
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (int v : e) t += v;
            deg = std::max(deg, t);
        }
        return deg;
    }

    double coeff(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0.0 : it->second;
    }

    void set(const Exponents& e, double c) {
        check_exps(e);
        if (keep(c))
            terms_[e] = c;
        else
            terms_.erase(e);
    }

    void add_term(const Exponents& e, double c) {
        check_exps(e);
        auto it = terms_.find(e);
        double v = (it == terms_.end() ? 0.0 : it->second) + c;
        if (keep(v)) {
            terms_[e] = v;
        } else if (it != terms_.end()) {
            terms_.erase(it);
        }
    }

    double eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("MultiPoly::eval: dimension mismatch");
        double acc = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int v = 0; v < dim_; ++v) {
                const int k = e[v];
                if (k == 0) continue;
                double pw = x[v];
                // small exponents dominate; plain square-and-multiply
                double r = 1.0;
                int n = k;
                while (n > 0) {
                    if (n & 1) r *= pw;
                    pw *= pw;
                    n >>= 1;
                }
                t *= r;
            }
            acc += t;
        }
        return acc;
    }

    double operator()(std::span<const double> x) const { return eval(x); }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same(b);
        MultiPoly r(a.dim_, std::max(a.prune_, b.prune_));
        Exponents e(a.dim_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (int v = 0; v < a.dim_; ++v) e[v] = ea[v] + eb[v];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    MultiPoly scaled(double s) const {
        MultiPoly r(dim_, prune_);
        for (const auto& [e, c] : terms_) r.add_term(e, s * c);
        return r;
    }

    /// Partial derivative with respect to variable i.
    MultiPoly partial(int i) const {
        if (i < 0 || i >= dim_) throw std::invalid_argument("MultiPoly::partial: index out of range");
        MultiPoly r(dim_, prune_);
        Exponents e(dim_);
        for (const auto& [ex, c] : terms_) {
            if (ex[i] == 0) continue;
            e = ex;
            e[i] -= 1;
            r.add_term(e, c * ex[i]);
        }
        return r;
    }

    /// Substitute x_i -> s * x_i for all variables (dilation pullback).
    MultiPoly dilated(double s) const {
        MultiPoly r(dim_, prune_);
        for (const auto& [e, c] : terms_) {
            int total = 0;
            for (int v : e) total += v;
            r.add_term(e, c * std::pow(s, total));
        }
        return r;
    }

    /// View this polynomial in a larger variable set (new variables unused).
    MultiPoly extended(int new_dim) const {
        if (new_dim < dim_) throw std::invalid_argument("MultiPoly::extended: cannot shrink");
        MultiPoly r(new_dim, prune_);
        Exponents e(new_dim, 0);
        for (const auto& [ex, c] : terms_) {
            std::copy(ex.begin(), ex.end(), e.begin());
            r.add_term(e, c);
        }
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

  private:
    bool keep(double c) const { return std::abs(c) > prune_ && c != 0.0; }
    void check_exps(const Exponents& e) const {
        if (static_cast<int>(e.size()) != dim_)
            throw std::invalid_argument("MultiPoly: exponent arity mismatch");
        for (int v : e)
            if (v < 0) throw std::invalid_argument("MultiPoly: negative exponent");
    }
    void check_same(const MultiPoly& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("MultiPoly: mixed dimensions");
    }

    int dim_ = 0;
    double prune_ = 0.0;
    std::map<Exponents, double> terms_;
};

inline double poly_eval(const MultiPoly& p, std::span<const double> x) { return p.eval(x); }

/// Angular derivative D_{i,j} p = x_j d/dx_i p - x_i d/dx_j p.
/// Indices are an ordered pair (0-based), any i != j; swapping them flips the sign.
inline MultiPoly dij_poly(const MultiPoly& p, int i, int j) {
    const int d = p.dim();
    if (i < 0 || j < 0 || i >= d || j >= d || i == j)
        throw std::invalid_argument("dij_poly: bad axis pair");
    return MultiPoly::variable(d, j) * p.partial(i) - MultiPoly::variable(d, i) * p.partial(j);
}

inline MultiPoly dij_poly_pow(const MultiPoly& p, int i, int j, int r) {
    MultiPoly q = p;
    for (int k = 0; k < r; ++k) q = dij_poly(q, i, j);
    return q;
}

/// Sum of squared angular derivatives over pairs i < j. On a homogeneous
/// harmonic of degree n this acts as multiplication by -n(n+d-2).
inline MultiPoly laplace_beltrami_poly(const MultiPoly& p) {
    const int d = p.dim();
    MultiPoly acc(d, p.prune_threshold());
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) acc += dij_poly(dij_poly(p, i, j), i, j);
    return acc;
}

/// Flat Laplacian sum d^2/dx_i^2.
inline MultiPoly laplacian_flat_poly(const MultiPoly& p) {
    MultiPoly acc(p.dim(), p.prune_threshold());
    for (int i = 0; i < p.dim(); ++i) acc += p.partial(i).partial(i);
    return acc;
}

/// Weighted second-order operator on the ball:
///   sum_i (1-x_i^2) d_i^2 - 2 sum_{i<j} x_i x_j d_i d_j - (d+2 mu) sum_i x_i d_i.
/// Its eigenvalue on the degree-n weighted-orthogonal space is -n(n+d+2 mu-1).
inline MultiPoly dmu_poly(const MultiPoly& p, double mu) {
    if (mu < 0.0) throw std::invalid_argument("dmu_poly: mu must be >= 0");
    const int d = p.dim();
    MultiPoly acc(d, p.prune_threshold());
    for (int i = 0; i < d; ++i) {
        MultiPoly xi = MultiPoly::variable(d, i);
        MultiPoly pii = p.partial(i).partial(i);
        acc += pii - xi * xi * pii;
        acc -= (xi * p.partial(i)).scaled(d + 2.0 * mu);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            MultiPoly xij = MultiPoly::variable(d, i) * MultiPoly::variable(d, j);
            acc -= (xij * p.partial(i).partial(j)).scaled(2.0);
        }
    return acc;
}

/// Squared weighted tangential piece along axis i:
///   (1-|x|^2) d_i^2 - (2 mu + 1) x_i d_i,
/// the conjugation of d_i (1-|x|^2) d_i by the ball weight.
inline MultiPoly dii_sq_poly(const MultiPoly& p, int i, double mu) {
    const int d = p.dim();
    if (i < 0 || i >= d) throw std::invalid_argument("dii_sq_poly: index out of range");
    if (mu < 0.0) throw std::invalid_argument("dii_sq_poly: mu must be >= 0");
    MultiPoly normsq(d, p.prune_threshold());
    for (int v = 0; v < d; ++v) {
        MultiPoly xv = MultiPoly::variable(d, v);
        normsq += xv * xv;
    }
    MultiPoly pii = p.partial(i).partial(i);
    MultiPoly acc = pii - normsq * pii;
    acc -= (MultiPoly::variable(d, i) * p.partial(i)).scaled(2.0 * mu + 1.0);
    return acc;
}

/// Composition p(Q x) expanded in the monomial basis.
inline MultiPoly rot_compose(const MultiPoly& p, const LinearMap& q) {
    const int d = p.dim();
    if (q.dim != d) throw std::invalid_argument("rot_compose: dimension mismatch");
    std::vector<MultiPoly> rows;
    rows.reserve(d);
    for (int i = 0; i < d; ++i) {
        MultiPoly row(d, p.prune_threshold());
        Exponents e(d, 0);
        for (int c = 0; c < d; ++c) {
            const double v = q.m[static_cast<size_t>(i) * d + c];
            if (v == 0.0) continue;
            e.assign(d, 0);
            e[c] = 1;
            row.add_term(e, v);
        }
        rows.push_back(std::move(row));
    }
    MultiPoly acc(d, p.prune_threshold());
    for (const auto& [e, c] : p.terms()) {
        MultiPoly t = MultiPoly::constant(d, c);
        for (int v = 0; v < d; ++v)
            for (int k = 0; k < e[v]; ++k) t = t * rows[v];
        acc += t;
    }
    return acc;
}

}  // namespace polyapprox
