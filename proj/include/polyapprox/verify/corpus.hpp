#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <polyapprox/fn.hpp>
#include <polyapprox/multipoly.hpp>

namespace polyapprox::verify {

// A named test function with its smoothness metadata.  Scans draw from this
// fixed corpus so that every suite sees the same spread of regularity:
// polynomials, kink functions, a fractional-power radial edge, an analytic
// non-polynomial.  `exact_dij(r, i, j)` returns the r-fold plane derivative
// in closed form when one is known and throws otherwise; suites use it to
// cross-check the numerical derivative paths.
struct CorpusEntry {
    std::string name;
    int dim = 0;
    Domain domain = Domain::sphere;
    FnHandle f;
    int poly_degree = -1;        // -1 when not a polynomial
    double alpha = 0.0;          // fractional smoothness parameter, 0 if n/a
    bool smooth = false;         // true when derivatives of every order exist
    bool aux = false;            // auxiliary: omitted from corpus(Domain), reachable by name
    std::string cls;             // short description of the smoothness class
    std::function<FnHandle(int r, int i, int j)> exact_dij;
};

namespace detail {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Plane derivatives are antisymmetric in (i, j); closures below are written
// for a canonical orientation.  Swapping the pair flips the sign of D, so an
// r-fold application picks up (-1)^r: only odd orders actually flip.
inline FnHandle flip_sign_if(FnHandle h, bool flip) {
    if (!flip) return h;
    FnHandle base = h;
    return FnHandle::from_fn(
        base.domain, base.dim,
        [base](std::span<const double> x) { return -base.eval(x); }, base.name);
}

inline std::function<FnHandle(int, int, int)> poly_dij(Domain dom,
                                                       std::shared_ptr<const MultiPoly> p) {
    return [dom, p](int r, int i, int j) {
        if (r < 0) throw std::invalid_argument("exact_dij: order must be >= 0");
        return FnHandle::from_poly(dom, dij_poly_pow(*p, i, j, r));
    };
}

// exp(a . x): D_{i,j} multiplies by g = a_i x_j - a_j x_i and
// D^2_{i,j} by (g^2 - (a_i x_i + a_j x_j)).
inline std::function<FnHandle(int, int, int)> exp_dij(Domain dom, std::vector<double> a) {
    const int dim = static_cast<int>(a.size());
    return [dom, dim, a](int r, int i, int j) {
        if (r < 0 || r > 2) throw std::invalid_argument("exact_dij: exp entry covers r <= 2");
        return FnHandle::from_fn(dom, dim, [a, r, i, j](std::span<const double> x) {
            double e = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) e += a[k] * x[k];
            const double f = std::exp(e);
            if (r == 0) return f;
            const double g = a[i] * x[j] - a[j] * x[i];
            if (r == 1) return g * f;
            return (g * g - (a[i] * x[i] + a[j] * x[j])) * f;
        });
    };
}

}  // namespace detail

inline const std::vector<CorpusEntry>& corpus_all() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> v;
        const double al = 0.75;
        const double c_al = std::pow(2.0, al);

        // ---- sphere entries, ambient dimension 3 ----
        {
            MultiPoly p = MultiPoly::constant(3, 0.1);
            p = p + MultiPoly::monomial(3, {1, 0, 0}, 1.0);
            p = p + MultiPoly::monomial(3, {0, 1, 1}, 0.5);
            p = p + MultiPoly::monomial(3, {2, 0, 1}, -0.25);
            auto sp = std::make_shared<const MultiPoly>(p);
            CorpusEntry e;
            e.name = "s.poly3";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_poly(Domain::sphere, p, "s.poly3");
            e.poly_degree = 3;
            e.smooth = true;
            e.cls = "polynomial, degree 3";
            e.exact_dij = detail::poly_dij(Domain::sphere, sp);
            v.push_back(std::move(e));
        }
        {
            MultiPoly p = MultiPoly::monomial(3, {6, 0, 0}, 0.5);
            p = p + MultiPoly::monomial(3, {0, 4, 2}, -1.0);
            p = p + MultiPoly::monomial(3, {1, 1, 1}, 0.25);
            p = p + MultiPoly::monomial(3, {0, 0, 3}, 1.0);
            p = p + MultiPoly::monomial(3, {0, 2, 0}, -0.3);
            auto sp = std::make_shared<const MultiPoly>(p);
            CorpusEntry e;
            e.name = "s.poly6";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_poly(Domain::sphere, p, "s.poly6");
            e.poly_degree = 6;
            e.smooth = true;
            e.cls = "polynomial, degree 6";
            e.exact_dij = detail::poly_dij(Domain::sphere, sp);
            v.push_back(std::move(e));
        }
        {
            // kink in generic position: the singular circle crosses the
            // latitude rings of a tensor rule transversally, so every ring
            // samples the near-kink band instead of resonating with it
            const std::array<double, 3> u = {1.0 / std::sqrt(6.0), std::sqrt(2.0 / 6.0),
                                             std::sqrt(3.0 / 6.0)};
            auto xu = [u](std::span<const double> x) {
                return u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
            };
            CorpusEntry e;
            e.name = "s.kink";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_fn(
                Domain::sphere, 3, [xu](std::span<const double> x) { return std::abs(xu(x)); },
                "s.kink");
            e.cls = "Lipschitz kink along a tilted great circle";
            e.exact_dij = [u, xu](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::sphere, 3, [xu](std::span<const double> x) {
                        return std::abs(xu(x));
                    });
                if (r > 2) throw std::invalid_argument("exact_dij: |x.u| covers r <= 2");
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (r == 1) {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return detail::sgn(xu(x)) *
                                                     (u[lo] * x[hi] - u[hi] * x[lo]);
                                          });
                } else {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return -detail::sgn(xu(x)) *
                                                     (u[lo] * x[lo] + u[hi] * x[hi]);
                                          });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "s.absx3c";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_fn(
                Domain::sphere, 3,
                [](std::span<const double> x) { return std::abs(x[2]) * x[2] * x[2]; },
                "s.absx3c");
            e.cls = "C^2 with a jump in the third derivative";
            e.exact_dij = [](int r, int i, int j) {
                if (r < 0 || r > 2) throw std::invalid_argument("exact_dij: |x3|^3 covers r <= 2");
                if (r == 0)
                    return FnHandle::from_fn(Domain::sphere, 3, [](std::span<const double> x) {
                        return std::abs(x[2]) * x[2] * x[2];
                    });
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (hi != 2) {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [](std::span<const double>) { return 0.0; });
                } else if (r == 1) {
                    h = FnHandle::from_fn(Domain::sphere, 3, [lo](std::span<const double> x) {
                        return -3.0 * x[lo] * x[2] * std::abs(x[2]);
                    });
                } else {
                    h = FnHandle::from_fn(Domain::sphere, 3, [lo](std::span<const double> x) {
                        return (-3.0 * x[2] * x[2] + 6.0 * x[lo] * x[lo]) * std::abs(x[2]);
                    });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            // one notch smoother than s.kink: the second plane derivative is a
            // bounded jump, so second-order scans see it in the algebraic
            // regime already at small degrees
            const std::array<double, 3> u = {1.0 / std::sqrt(6.0), std::sqrt(2.0 / 6.0),
                                             std::sqrt(3.0 / 6.0)};
            auto xu = [u](std::span<const double> x) {
                return u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
            };
            CorpusEntry e;
            e.name = "s.kink2";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.aux = true;
            e.f = FnHandle::from_fn(
                Domain::sphere, 3,
                [xu](std::span<const double> x) {
                    const double g = xu(x);
                    return g * std::abs(g);
                },
                "s.kink2");
            e.cls = "C^1 with a jump in the second derivative";
            e.exact_dij = [u, xu](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::sphere, 3, [xu](std::span<const double> x) {
                        const double g = xu(x);
                        return g * std::abs(g);
                    });
                if (r > 2) throw std::invalid_argument("exact_dij: (x.u)|x.u| covers r <= 2");
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (r == 1) {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return 2.0 * std::abs(xu(x)) *
                                                     (u[lo] * x[hi] - u[hi] * x[lo]);
                                          });
                } else {
                    h = FnHandle::from_fn(
                        Domain::sphere, 3, [u, xu, lo, hi](std::span<const double> x) {
                            const double g = xu(x);
                            const double dg = u[lo] * x[hi] - u[hi] * x[lo];
                            return 2.0 * detail::sgn(g) * dg * dg -
                                   2.0 * std::abs(g) * (u[lo] * x[lo] + u[hi] * x[hi]);
                        });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "s.falpha";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_fn(
                Domain::sphere, 3,
                [c_al, al](std::span<const double> x) {
                    return c_al * std::pow(std::max(0.0, 1.0 - x[0]), al);
                },
                "s.falpha");
            e.alpha = al;
            e.cls = "fractional power of the distance to a pole";
            e.exact_dij = [c_al, al](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::sphere, 3,
                                             [c_al, al](std::span<const double> x) {
                                                 return c_al *
                                                        std::pow(std::max(0.0, 1.0 - x[0]), al);
                                             });
                if (r != 1)
                    throw std::invalid_argument("exact_dij: fractional entry covers r <= 1");
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (lo != 0) {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [](std::span<const double>) { return 0.0; });
                } else {
                    h = FnHandle::from_fn(Domain::sphere, 3,
                                          [c_al, al, hi](std::span<const double> x) {
                                              const double u = std::max(0.0, 1.0 - x[0]);
                                              if (u == 0.0) return 0.0;
                                              return x[hi] * (-al) * c_al * std::pow(u, al - 1.0);
                                          });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "s.bump";
            e.dim = 3;
            e.domain = Domain::sphere;
            e.f = FnHandle::from_fn(
                Domain::sphere, 3,
                [](std::span<const double> x) {
                    return std::exp(x[0] + 0.5 * x[1] - 0.25 * x[2]);
                },
                "s.bump");
            e.smooth = true;
            e.cls = "analytic, not a polynomial";
            e.exact_dij = detail::exp_dij(Domain::sphere, {1.0, 0.5, -0.25});
            v.push_back(std::move(e));
        }

        // ---- ball entries, dimension 2 ----
        {
            MultiPoly p = MultiPoly::constant(2, 0.25);
            p = p + MultiPoly::monomial(2, {0, 1}, -0.5);
            p = p + MultiPoly::monomial(2, {2, 0}, 1.0);
            p = p + MultiPoly::monomial(2, {1, 1}, 0.3);
            auto sp = std::make_shared<const MultiPoly>(p);
            CorpusEntry e;
            e.name = "b.poly2";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_poly(Domain::ball, p, "b.poly2");
            e.poly_degree = 2;
            e.smooth = true;
            e.cls = "polynomial, degree 2";
            e.exact_dij = detail::poly_dij(Domain::ball, sp);
            v.push_back(std::move(e));
        }
        {
            MultiPoly p = MultiPoly::monomial(2, {4, 0}, 0.5);
            p = p + MultiPoly::monomial(2, {2, 2}, -1.0);
            p = p + MultiPoly::monomial(2, {0, 3}, 0.25);
            p = p + MultiPoly::monomial(2, {1, 1}, 1.0);
            p = p + MultiPoly::constant(2, -0.2);
            auto sp = std::make_shared<const MultiPoly>(p);
            CorpusEntry e;
            e.name = "b.poly4";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_poly(Domain::ball, p, "b.poly4");
            e.poly_degree = 4;
            e.smooth = true;
            e.cls = "polynomial, degree 4";
            e.exact_dij = detail::poly_dij(Domain::ball, sp);
            v.push_back(std::move(e));
        }
        {
            // same generic-position reasoning as the sphere kink: the kink
            // diameter should not coincide with an angular grid line
            const std::array<double, 2> u = {1.0 / std::sqrt(3.0), std::sqrt(2.0 / 3.0)};
            auto xu = [u](std::span<const double> x) { return u[0] * x[0] + u[1] * x[1]; };
            CorpusEntry e;
            e.name = "b.kink";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_fn(
                Domain::ball, 2, [xu](std::span<const double> x) { return std::abs(xu(x)); },
                "b.kink");
            e.cls = "Lipschitz kink along a tilted diameter";
            e.exact_dij = [u, xu](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::ball, 2, [xu](std::span<const double> x) {
                        return std::abs(xu(x));
                    });
                if (r > 2) throw std::invalid_argument("exact_dij: |x.u| covers r <= 2");
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (r == 1) {
                    h = FnHandle::from_fn(Domain::ball, 2,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return detail::sgn(xu(x)) *
                                                     (u[lo] * x[hi] - u[hi] * x[lo]);
                                          });
                } else {
                    h = FnHandle::from_fn(Domain::ball, 2,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return -detail::sgn(xu(x)) *
                                                     (u[lo] * x[lo] + u[hi] * x[hi]);
                                          });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "b.absx1c";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_fn(
                Domain::ball, 2,
                [](std::span<const double> x) { return std::abs(x[0]) * x[0] * x[0]; },
                "b.absx1c");
            e.cls = "C^2 with a jump in the third derivative";
            e.exact_dij = [](int r, int i, int j) {
                if (r < 0 || r > 2) throw std::invalid_argument("exact_dij: |x1|^3 covers r <= 2");
                if (r == 0)
                    return FnHandle::from_fn(Domain::ball, 2, [](std::span<const double> x) {
                        return std::abs(x[0]) * x[0] * x[0];
                    });
                const bool flip = i > j;
                FnHandle h;
                if (r == 1) {
                    h = FnHandle::from_fn(Domain::ball, 2, [](std::span<const double> x) {
                        return 3.0 * x[0] * x[1] * std::abs(x[0]);
                    });
                } else {
                    h = FnHandle::from_fn(Domain::ball, 2, [](std::span<const double> x) {
                        return (6.0 * x[1] * x[1] - 3.0 * x[0] * x[0]) * std::abs(x[0]);
                    });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            // ball counterpart of s.kink2: second plane derivative jumps
            // across the tilted diameter, no worse singularity
            const std::array<double, 2> u = {1.0 / std::sqrt(3.0), std::sqrt(2.0 / 3.0)};
            auto xu = [u](std::span<const double> x) { return u[0] * x[0] + u[1] * x[1]; };
            CorpusEntry e;
            e.name = "b.kink2";
            e.dim = 2;
            e.domain = Domain::ball;
            e.aux = true;
            e.f = FnHandle::from_fn(
                Domain::ball, 2,
                [xu](std::span<const double> x) {
                    const double g = xu(x);
                    return g * std::abs(g);
                },
                "b.kink2");
            e.cls = "C^1 with a jump in the second derivative";
            e.exact_dij = [u, xu](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::ball, 2, [xu](std::span<const double> x) {
                        const double g = xu(x);
                        return g * std::abs(g);
                    });
                if (r > 2) throw std::invalid_argument("exact_dij: (x.u)|x.u| covers r <= 2");
                const bool flip = i > j;
                const int lo = flip ? j : i, hi = flip ? i : j;
                FnHandle h;
                if (r == 1) {
                    h = FnHandle::from_fn(Domain::ball, 2,
                                          [u, xu, lo, hi](std::span<const double> x) {
                                              return 2.0 * std::abs(xu(x)) *
                                                     (u[lo] * x[hi] - u[hi] * x[lo]);
                                          });
                } else {
                    h = FnHandle::from_fn(
                        Domain::ball, 2, [u, xu, lo, hi](std::span<const double> x) {
                            const double g = xu(x);
                            const double dg = u[lo] * x[hi] - u[hi] * x[lo];
                            return 2.0 * detail::sgn(g) * dg * dg -
                                   2.0 * std::abs(g) * (u[lo] * x[lo] + u[hi] * x[hi]);
                        });
                }
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "b.falpha";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_fn(
                Domain::ball, 2,
                [c_al, al](std::span<const double> x) {
                    return c_al * std::pow(std::max(0.0, 1.0 - x[0]), al);
                },
                "b.falpha");
            e.alpha = al;
            e.cls = "fractional power vanishing at a boundary point";
            e.exact_dij = [c_al, al](int r, int i, int j) {
                if (r == 0)
                    return FnHandle::from_fn(Domain::ball, 2,
                                             [c_al, al](std::span<const double> x) {
                                                 return c_al *
                                                        std::pow(std::max(0.0, 1.0 - x[0]), al);
                                             });
                if (r != 1)
                    throw std::invalid_argument("exact_dij: fractional entry covers r <= 1");
                const bool flip = i > j;
                FnHandle h =
                    FnHandle::from_fn(Domain::ball, 2, [c_al, al](std::span<const double> x) {
                        const double u = std::max(0.0, 1.0 - x[0]);
                        if (u == 0.0) return 0.0;
                        return x[1] * (-al) * c_al * std::pow(u, al - 1.0);
                    });
                return detail::flip_sign_if(h, flip && (r % 2 == 1));
            };
            v.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "b.bump";
            e.dim = 2;
            e.domain = Domain::ball;
            e.f = FnHandle::from_fn(
                Domain::ball, 2,
                [](std::span<const double> x) { return std::exp(x[0] + 0.5 * x[1]); }, "b.bump");
            e.smooth = true;
            e.cls = "analytic, not a polynomial";
            e.exact_dij = detail::exp_dij(Domain::ball, {1.0, 0.5});
            v.push_back(std::move(e));
        }
        return v;
    }();
    return entries;
}

inline std::vector<CorpusEntry> corpus(Domain dom) {
    std::vector<CorpusEntry> out;
    for (const auto& e : corpus_all())
        if (e.domain == dom && !e.aux) out.push_back(e);
    return out;
}

inline const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus_all())
        if (e.name == name) return e;
    throw std::invalid_argument("corpus: unknown entry " + name);
}

}  // namespace polyapprox::verify
