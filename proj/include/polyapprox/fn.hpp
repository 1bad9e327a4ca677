#pragma once

// Domain-tagged function handles. A handle wraps a pointwise evaluator and,
// when the function is an explicit polynomial, keeps that representation so
// downstream operators can differentiate and project exactly instead of by
// finite differences.

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "polyapprox/multipoly.hpp"

namespace polyapprox {

enum class Domain { sphere, ball };

struct FnHandle {
    Domain domain = Domain::sphere;
    int dim = 0;  // ambient dimension: sphere in R^dim, ball subset of R^dim
    std::function<double(std::span<const double>)> eval;
    std::shared_ptr<const MultiPoly> poly;  // optional exact representation
    std::string name;

    bool is_poly() const { return poly != nullptr; }

    double operator()(std::span<const double> x) const { return eval(x); }

    static FnHandle from_poly(Domain dom, MultiPoly p, std::string name = "") {
        FnHandle f;
        f.domain = dom;
        f.dim = p.dim();
        f.poly = std::make_shared<const MultiPoly>(std::move(p));
        auto sp = f.poly;
        f.eval = [sp](std::span<const double> x) { return sp->eval(x); };
        f.name = std::move(name);
        return f;
    }

    static FnHandle from_fn(Domain dom, int dim, std::function<double(std::span<const double>)> fn,
                            std::string name = "") {
        if (dim <= 0) throw std::invalid_argument("FnHandle: dim must be positive");
        FnHandle f;
        f.domain = dom;
        f.dim = dim;
        f.eval = std::move(fn);
        f.name = std::move(name);
        return f;
    }
};

inline FnHandle fn_sub(const FnHandle& a, const FnHandle& b, std::string name = "") {
    if (a.dim != b.dim || a.domain != b.domain)
        throw std::invalid_argument("fn_sub: mismatched handles");
    if (a.is_poly() && b.is_poly()) return FnHandle::from_poly(a.domain, *a.poly - *b.poly, name);
    FnHandle f;
    f.domain = a.domain;
    f.dim = a.dim;
    auto ea = a.eval, eb = b.eval;
    f.eval = [ea, eb](std::span<const double> x) { return ea(x) - eb(x); };
    f.name = std::move(name);
    return f;
}

}  // namespace polyapprox
