#pragma once

// Deterministic quadrature used throughout: Gauss-Legendre rules generated
// at startup (Newton on the Legendre recurrence, machine accurate), a fixed
// composite integrator for finite-difference-friendly evaluations, and a
// globally adaptive bisection scheme with a GL10/GL21 error estimate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <string>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

/// Budget and tolerances for adaptive integration; `omega_max` is the
/// frequency cutoff of the spectral-density integrals that use this spec.
struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_intervals = 4000;
    double omega_max = 60.0;

    void validate() const {
        std::string bad;
        if (!(rel_tol > 0.0)) bad += " rel_tol <= 0;";
        if (!(abs_tol > 0.0)) bad += " abs_tol <= 0;";
        if (max_intervals < 1) bad += " max_intervals < 1;";
        if (!(omega_max > 0.0)) bad += " omega_max <= 0;";
        if (!bad.empty()) throw ValidationError("QuadSpec invalid:" + bad);
    }
};

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;   ///< error estimate
    int evaluations = 0;
};

namespace quad_detail {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on P_n; standard Chebyshev initial guesses.
inline Rule make_gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pi = 3.14159265358979323846264338327950288;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (converged) break;  // one polishing step past convergence
            if (std::abs(dx) < 1e-14 * std::max(1.0, std::abs(x))) converged = true;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

inline const Rule& gauss_legendre(int n) {
    static std::mutex m;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

template <typename F>
double apply_rule(const Rule& r, F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(c + h * r.nodes[i]);
    return acc * h;
}

}  // namespace quad_detail

/// Composite Gauss-Legendre with a fixed panel layout. Deterministic in the
/// strongest sense: the node set depends only on (a, b, panels, order), so
/// finite-difference stencils that share a layout see smooth errors.
template <typename F>
double integrate_fixed(F&& f, double a, double b, int panels, int order = 15) {
    if (panels < 1) panels = 1;
    const auto& rule = quad_detail::gauss_legendre(order);
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        acc += quad_detail::apply_rule(rule, f, a + p * h, a + (p + 1) * h);
    return acc;
}

/// Globally adaptive integration on [a, b]: worst interval first, GL10/GL21
/// difference as the error estimate.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadSpec& spec = {}) {
    spec.validate();
    if (a == b) return {0.0, 0.0, 0};
    const auto& lo = quad_detail::gauss_legendre(10);
    const auto& hi = quad_detail::gauss_legendre(21);

    struct Seg {
        double a, b, value, err;
        std::size_t id;
        bool operator<(const Seg& o) const {
            if (err != o.err) return err < o.err;
            return id > o.id;  // deterministic tie-break
        }
    };

    int evals = 0;
    std::size_t next_id = 0;
    auto make_seg = [&](double x0, double x1) {
        double v_hi = quad_detail::apply_rule(hi, f, x0, x1);
        double v_lo = quad_detail::apply_rule(lo, f, x0, x1);
        evals += 31;
        return Seg{x0, x1, v_hi, std::abs(v_hi - v_lo), next_id++};
    };

    std::priority_queue<Seg> heap;
    // seed with a handful of panels so narrow features are not missed
    const int seed_panels = 8;
    double total = 0.0, total_err = 0.0;
    for (int p = 0; p < seed_panels; ++p) {
        Seg s = make_seg(a + (b - a) * p / seed_panels, a + (b - a) * (p + 1) / seed_panels);
        total += s.value;
        total_err += s.err;
        heap.push(s);
    }

    int intervals = seed_panels;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (intervals >= spec.max_intervals)
            throw ConvergenceError("integrate_adaptive: interval budget exhausted, err=" +
                                   std::to_string(total_err));
        Seg worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.err;
        double mid = 0.5 * (worst.a + worst.b);
        Seg l = make_seg(worst.a, mid);
        Seg r = make_seg(mid, worst.b);
        total += l.value + r.value;
        total_err += l.err + r.err;
        heap.push(l);
        heap.push(r);
        ++intervals;
    }
    return {total, total_err, evals};
}

}  // namespace qbm
