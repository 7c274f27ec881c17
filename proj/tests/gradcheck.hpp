#ifndef SGGAN_TESTS_GRADCHECK_HPP
#define SGGAN_TESTS_GRADCHECK_HPP

#include "sggan/tensor.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace sggan::testutil {

// Central-difference gradient of the scalar f() with respect to the entries
// of x, evaluated by mutating x in place and restoring it.
inline Tensor numeric_grad(Tensor& x, const std::function<double()>& f, double h = 1e-5) {
    Tensor g(x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x.data[i];
        x.data[i] = orig + h;
        const double fp = f();
        x.data[i] = orig - h;
        const double fm = f();
        x.data[i] = orig;
        g.data[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

struct GradDiff {
    double rel_l2 = 0.0;    // ‖a−n‖ / max(‖a‖,‖n‖)
    double max_abs = 0.0;   // worst per-coordinate gap
    bool ok = false;
};

inline GradDiff compare_grads(const Tensor& analytic, const Tensor& numeric,
                              double rtol = 1e-4, double atol = 1e-6) {
    GradDiff d;
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    bool coords_ok = true;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double a = analytic.data[i];
        const double n = numeric.data[i];
        diff2 += (a - n) * (a - n);
        a2 += a * a;
        n2 += n * n;
        const double gap = std::abs(a - n);
        d.max_abs = std::max(d.max_abs, gap);
        if (gap > atol + rtol * std::max(std::abs(a), std::abs(n))) coords_ok = false;
    }
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2), 1e-12});
    d.rel_l2 = std::sqrt(diff2) / denom;
    d.ok = coords_ok && d.rel_l2 <= rtol;
    return d;
}

// Fill with moderate values kept away from zero so piecewise-linear kinks
// (relu, |.|) do not sit inside the finite-difference window.
inline void fill_away_from_zero(Tensor& t, Rng& rng, double margin = 0.05) {
    for (double& v : t.data) {
        v = rng.uniform(-1.0, 1.0);
        if (std::abs(v) < margin) v = v < 0 ? v - margin : v + margin;
    }
}

}

#endif
