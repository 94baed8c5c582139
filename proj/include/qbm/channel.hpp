#pragma once

// Single-mode Gaussian states and the quantum Brownian motion channel map
//   d(tau)     = S(tau) d(0)
//   sigma(tau) = S(tau) sigma(0) S(tau)^T + T(tau)
// with S = e^{-Gamma-tilde/2} R(tau/x) and the weak-coupling noise
//   T(tau) = R(tau/x) [ int_0^tau R^T(t'/x) M(t') R(t'/x) dt' ] R^T(tau/x),
//   M = [[Delta, -Pi/2], [-Pi/2, 0]].
// The e^{+-Gamma-tilde} dressing of the noise bracket is of higher order in
// the coupling and is deliberately dropped; as a consequence det sigma can
// transiently dip below the pure-state floor 1/4, which is surfaced through
// a warning channel rather than clamped.

#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "qbm/coeffs.hpp"
#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

struct Vec2 {
    double q = 0.0, p = 0.0;
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation(double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        return {c, s, -s, c};
    }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.q + a12 * v.p, a21 * v.q + a22 * v.p};
    }
    Mat2 inverse() const {
        double d = det();
        if (d == 0.0) throw DomainError("Mat2: singular matrix");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

/// Symmetric 2x2 covariance matrix; vacuum is (1/2) I.
struct CovMatrix {
    double m11 = 0.5, m12 = 0.0, m22 = 0.5;

    double det() const { return m11 * m22 - m12 * m12; }
    Mat2 mat() const { return {m11, m12, m12, m22}; }
    static CovMatrix from_mat(const Mat2& m) {
        // symmetrize; callers only hand in matrices symmetric up to roundoff
        return {m.a11, 0.5 * (m.a12 + m.a21), m.a22};
    }
    CovMatrix operator+(const CovMatrix& o) const {
        return {m11 + o.m11, m12 + o.m12, m22 + o.m22};
    }
    void validate() const {
        if (!(m11 > 0.0) || !(m22 > 0.0))
            throw ValidationError("CovMatrix: diagonal entries must be positive");
    }
};

/// Gaussian state: first moments d and covariance sigma.
struct GaussianState {
    Vec2 d;
    CovMatrix sigma;
};

/// Initial probe parameterized by the position-momentum correlation gamma.
struct ProbeSpec {
    double gamma = 0.0;
    void validate() const {
        if (!std::isfinite(gamma)) throw ValidationError("ProbeSpec: gamma must be finite");
    }
};

/// Drift and noise matrices of the channel at one time.
struct ChannelMatrices {
    Mat2 s_mat;
    CovMatrix t_mat;
    double tau = 0.0;
};

/// Physicality warning raised when the weak-coupling truncation produces
/// det sigma below the pure-state floor. Never clamped.
struct EvolveWarning {
    double tau = 0.0;
    double det_sigma = 0.0;
    std::string message;
};

using WarningList = std::vector<EvolveWarning>;

/// Purity mu = 1/(2 sqrt(det sigma)).
inline double purity(const GaussianState& state) {
    double d = state.sigma.det();
    if (!(d > 0.0)) throw DomainError("purity: det sigma must be positive");
    return 1.0 / (2.0 * std::sqrt(d));
}

/// Correlated probe: d = 0, sigma = (1/2) [[1, g], [g, 1+g^2]].
/// det sigma = 1/4 exactly for every gamma, so the state is pure.
inline GaussianState initial_correlated_state(const ProbeSpec& probe) {
    probe.validate();
    const double g = probe.gamma;
    GaussianState s;
    s.d = {0.0, 0.0};
    s.sigma = {0.5, 0.5 * g, 0.5 * (1.0 + g * g)};
    return s;
}

/// Squeezed-vacuum covariance, squeezing r and phase phi.
inline CovMatrix squeezed_cov(double r, double phi) {
    if (!(r >= 0.0)) throw DomainError("squeezed_cov: r must be >= 0");
    double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    return {0.5 * (ch - sh * std::cos(phi)), 0.5 * sh * std::sin(phi),
            0.5 * (ch + sh * std::cos(phi))};
}

/// Free-particle covariance at u = t / tau_0: correlations grow linearly.
inline CovMatrix free_evolution_cov(double t_over_tau0) {
    const double u = t_over_tau0;
    return {0.5 * (1.0 + u * u), 0.5 * u, 0.5};
}

namespace channel_detail {

inline void check_physicality(const GaussianState& s, double tau, WarningList* warnings) {
    const double d = s.sigma.det();
    if (d < 0.25 * (1.0 - 1e-3) && warnings != nullptr) {
        warnings->push_back(
            {tau, d,
             "det sigma = " + std::to_string(d) +
                 " below pure-state floor 1/4; weak-coupling noise truncation artifact"});
    }
}

inline Mat2 m_matrix(double delta, double pi_c) {
    return {delta, -0.5 * pi_c, -0.5 * pi_c, 0.0};
}

// panels per unit tau resolving both the tau/x rotation and the O(1)
// kernel scale of the coefficients
inline double auto_panel_density(double x) { return std::max(1.0 / x, 2.0); }

}  // namespace channel_detail

/// Drift matrix S(tau) = e^{-Gamma-tilde/2} R(tau/x); det S = e^{-Gamma-tilde}.
inline Mat2 drift_matrix(double tau, const BathSpec& bath, const QuadSpec& quad = {}) {
    if (!(tau >= 0.0)) throw DomainError("drift_matrix: tau must be >= 0");
    bath.require_ohmic("drift_matrix");
    const double gt = gamma_tilde(tau, bath, quad);
    return Mat2::rotation(tau / bath.x) * std::exp(-0.5 * gt);
}

/// Weak-coupling noise matrix T(tau), adaptive quadrature of the bracket
/// integral with the closed-form coefficients as integrands. All three
/// components share one set of nodes.
inline CovMatrix noise_matrix(double tau, const BathSpec& bath, const QuadSpec& quad = {},
                              const AccuracySpec& acc = {}) {
    if (!(tau >= 0.0)) throw DomainError("noise_matrix: tau must be >= 0");
    bath.require_ohmic("noise_matrix");
    quad.validate();
    if (tau == 0.0) return {0.0, 0.0, 0.0};

    using quad_detail::apply_rule;
    using quad_detail::gauss_legendre;
    const auto& lo = gauss_legendre(10);
    const auto& hi = gauss_legendre(21);

    auto panel_integral = [&](const quad_detail::Rule& rule, double a, double b) {
        Mat2 acc_m{};
        const double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = c + h * rule.nodes[i];
            const Mat2 R = Mat2::rotation(t / bath.x);
            const Mat2 M = channel_detail::m_matrix(delta_coeff(t, bath, acc),
                                                    pi_coeff(t, bath, acc));
            acc_m = acc_m + (R.transpose() * M * R) * (rule.weights[i] * h);
        }
        return acc_m;
    };

    struct Seg {
        double a, b, err;
        Mat2 value;
        std::size_t id;
        bool operator<(const Seg& o) const {
            if (err != o.err) return err < o.err;
            return id > o.id;
        }
    };
    std::size_t next_id = 0;
    auto make_seg = [&](double a, double b) {
        Mat2 v_hi = panel_integral(hi, a, b);
        Mat2 v_lo = panel_integral(lo, a, b);
        return Seg{a, b, (v_hi - v_lo).max_abs(), v_hi, next_id++};
    };

    std::priority_queue<Seg> heap;
    Mat2 total{};
    double total_err = 0.0;
    const int seed = 8;
    for (int p = 0; p < seed; ++p) {
        Seg s = make_seg(tau * p / seed, tau * (p + 1) / seed);
        total = total + s.value;
        total_err += s.err;
        heap.push(s);
    }
    int intervals = seed;
    while (total_err > std::max(quad.abs_tol, quad.rel_tol * std::max(total.max_abs(), 1.0))) {
        if (intervals >= quad.max_intervals)
            throw ConvergenceError("noise_matrix: interval budget exhausted");
        Seg w = heap.top();
        heap.pop();
        total = total - w.value;
        total_err -= w.err;
        double mid = 0.5 * (w.a + w.b);
        Seg l = make_seg(w.a, mid), r = make_seg(mid, w.b);
        total = total + l.value + r.value;
        total_err += l.err + r.err;
        heap.push(l);
        heap.push(r);
        ++intervals;
    }
    const Mat2 R = Mat2::rotation(tau / bath.x);
    return CovMatrix::from_mat(R * total * R.transpose());
}

/// Drift and noise at one time.
inline ChannelMatrices channel_matrices(double tau, const BathSpec& bath,
                                        const QuadSpec& quad = {}) {
    return {drift_matrix(tau, bath, quad), noise_matrix(tau, bath, quad), tau};
}

/// Apply the channel to a state: d -> S d, sigma -> S sigma S^T + T.
inline GaussianState evolve(const GaussianState& state, double tau, const BathSpec& bath,
                            const QuadSpec& quad = {}, WarningList* warnings = nullptr) {
    if (!(tau >= 0.0)) throw DomainError("evolve: tau must be >= 0");
    state.sigma.validate();
    if (tau == 0.0) return state;
    const Mat2 S = drift_matrix(tau, bath, quad);
    const CovMatrix T = noise_matrix(tau, bath, quad);
    GaussianState out;
    out.d = S * state.d;
    out.sigma = CovMatrix::from_mat(S * state.sigma.mat() * S.transpose()) + T;
    channel_detail::check_physicality(out, tau, warnings);
    return out;
}

/// Precomputed evolution over a tau grid. The Gamma-tilde and noise-bracket
/// integrals accumulate across grid steps with fixed Gauss-Legendre panels,
/// so a whole curve costs one coefficient sweep and every stencil run of a
/// finite-difference derivative sees the identical node layout.
class EvolutionGrid {
public:
    EvolutionGrid(const BathSpec& bath, std::vector<double> taus, const AccuracySpec& acc = {},
                  double panel_density = 0.0)
        : bath_(bath), tau_(std::move(taus)), acc_(acc) {
        bath_.require_ohmic("EvolutionGrid");
        acc_.validate();
        if (tau_.empty()) throw ValidationError("EvolutionGrid: empty tau grid");
        if (!(tau_.front() >= 0.0))
            throw ValidationError("EvolutionGrid: grid must start at tau >= 0");
        for (std::size_t i = 1; i < tau_.size(); ++i)
            if (!(tau_[i] > tau_[i - 1]))
                throw ValidationError("EvolutionGrid: grid must be strictly increasing");
        if (panel_density <= 0.0) panel_density = channel_detail::auto_panel_density(bath.x);

        const auto& rule = quad_detail::gauss_legendre(15);
        gamma_tilde_.resize(tau_.size());
        bracket_.resize(tau_.size());
        double gt = 0.0;
        Mat2 B{};
        double prev = 0.0;
        for (std::size_t k = 0; k < tau_.size(); ++k) {
            const double t1 = tau_[k];
            if (t1 > prev) {
                int panels = std::max(1, static_cast<int>(std::ceil((t1 - prev) * panel_density)));
                const double h = (t1 - prev) / panels;
                for (int p = 0; p < panels; ++p) {
                    const double a = prev + p * h, b = prev + (p + 1) * h;
                    const double hw = 0.5 * (b - a), c = 0.5 * (a + b);
                    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                        const double t = c + hw * rule.nodes[i];
                        const double w = rule.weights[i] * hw;
                        gt += w * 2.0 * gamma_coeff(t, bath_, acc_);
                        const Mat2 R = Mat2::rotation(t / bath_.x);
                        const Mat2 M = channel_detail::m_matrix(delta_coeff(t, bath_, acc_),
                                                                pi_coeff(t, bath_, acc_));
                        B = B + (R.transpose() * M * R) * w;
                    }
                }
                prev = t1;
            }
            gamma_tilde_[k] = gt;
            bracket_[k] = B;
        }
    }

    std::size_t size() const { return tau_.size(); }
    double tau_at(std::size_t i) const { return tau_[i]; }
    double gamma_tilde_at(std::size_t i) const { return gamma_tilde_[i]; }

    Mat2 drift_at(std::size_t i) const {
        return Mat2::rotation(tau_[i] / bath_.x) * std::exp(-0.5 * gamma_tilde_[i]);
    }
    CovMatrix noise_at(std::size_t i) const {
        const Mat2 R = Mat2::rotation(tau_[i] / bath_.x);
        return CovMatrix::from_mat(R * bracket_[i] * R.transpose());
    }
    GaussianState evolve_at(std::size_t i, const GaussianState& s0,
                            WarningList* warnings = nullptr) const {
        const Mat2 S = drift_at(i);
        GaussianState out;
        out.d = S * s0.d;
        out.sigma = CovMatrix::from_mat(S * s0.sigma.mat() * S.transpose()) + noise_at(i);
        channel_detail::check_physicality(out, tau_[i], warnings);
        return out;
    }

private:
    BathSpec bath_;
    std::vector<double> tau_;
    std::vector<double> gamma_tilde_;
    std::vector<Mat2> bracket_;
    AccuracySpec acc_;
};

/// Dense phase-space sampling of the Wigner function.
struct WignerGrid {
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    std::vector<double> values;  ///< row-major, values[iq * p_axis.size() + ip]

    double at(std::size_t iq, std::size_t ip) const { return values[iq * p_axis.size() + ip]; }
};

/// W(r) = exp(-1/2 (r-d)^T sigma^{-1} (r-d)) / (2 pi sqrt(det sigma)).
inline WignerGrid wigner_grid(const GaussianState& state, const std::vector<double>& q_axis,
                              const std::vector<double>& p_axis) {
    const double dt = state.sigma.det();
    if (!(dt > 0.0)) throw DomainError("wigner_grid: singular covariance");
    auto check_axis = [](const std::vector<double>& ax, const char* name) {
        if (ax.size() < 2) throw ValidationError(std::string("wigner_grid: ") + name + " too short");
        for (std::size_t i = 1; i < ax.size(); ++i)
            if (!(ax[i] > ax[i - 1]))
                throw ValidationError(std::string("wigner_grid: ") + name +
                                      " must be strictly increasing");
    };
    check_axis(q_axis, "q_axis");
    check_axis(p_axis, "p_axis");

    const Mat2 inv = state.sigma.mat().inverse();
    const double pi = 3.14159265358979323846264338327950288;
    const double norm = 1.0 / (2.0 * pi * std::sqrt(dt));
    WignerGrid g;
    g.q_axis = q_axis;
    g.p_axis = p_axis;
    g.values.resize(q_axis.size() * p_axis.size());
    for (std::size_t iq = 0; iq < q_axis.size(); ++iq) {
        const double dq = q_axis[iq] - state.d.q;
        for (std::size_t ip = 0; ip < p_axis.size(); ++ip) {
            const double dp = p_axis[ip] - state.d.p;
            const double quad_form =
                inv.a11 * dq * dq + (inv.a12 + inv.a21) * dq * dp + inv.a22 * dp * dp;
            g.values[iq * p_axis.size() + ip] = norm * std::exp(-0.5 * quad_form);
        }
    }
    return g;
}

}  // namespace qbm
