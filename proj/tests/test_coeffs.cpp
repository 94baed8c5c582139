#include <catch_amalgamated.hpp>

#include <cmath>

#include "qbm/coeffs.hpp"
#include "qbm/quadrature.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using qbm::BathSpec;
using qbm::CoeffKind;
using qbm::Regime;

namespace {

BathSpec bath_hi(double x = 0.15, double thT = 1000.0, double alpha = 0.1) {
    BathSpec b;
    b.x = x;
    b.theta_T = thT;
    b.alpha = alpha;
    b.regime = Regime::HighT;
    return b;
}

BathSpec bath_lo(double x = 0.15, double thT = 10.0, double alpha = 0.1) {
    BathSpec b = bath_hi(x, thT, alpha);
    b.regime = Regime::LowT;
    return b;
}

// Independent 1D route: the omega-integral of the defining double integral
// evaluates in closed form to rational kernels; the remaining tau'-integral
// is done with a fixed-order composite rule. Used to cross-validate the 2D
// adaptive oracle with a scheme of different structure and order.
double reduced_1d(CoeffKind kind, double tau, const BathSpec& b) {
    const double a2 = b.alpha * b.alpha;
    auto kernel = [&](double t) {
        double k;
        if (kind == CoeffKind::Gamma) {
            k = 2.0 * t / ((1.0 + t * t) * (1.0 + t * t));
        } else if (b.regime == Regime::HighT) {
            k = 2.0 * b.theta_T / (1.0 + t * t);
        } else {
            const double a = 1.0 + 1.0 / b.theta_T;
            k = (1.0 - t * t) / ((1.0 + t * t) * (1.0 + t * t)) +
                2.0 * (a * a - t * t) / ((a * a + t * t) * (a * a + t * t));
        }
        double trig = (kind == CoeffKind::Delta) ? std::cos(t / b.x) : std::sin(t / b.x);
        return k * trig;
    };
    int panels = 40 + static_cast<int>(20.0 * tau / b.x);
    return a2 * qbm::integrate_fixed(kernel, 0.0, tau, panels, 21);
}

}  // namespace

TEST_CASE("all coefficients vanish at tau = 0") {
    for (auto b : {bath_hi(), bath_lo(0.5), bath_hi(5.0)}) {
        CHECK(qbm::gamma_coeff(0.0, b) == 0.0);
        CHECK(qbm::delta_coeff(0.0, b) == 0.0);
        CHECK(qbm::pi_coeff(0.0, b) == 0.0);
        CHECK(qbm::gamma_tilde(0.0, b) == 0.0);
        CHECK(qbm::coeff_oracle(CoeffKind::Delta, 0.0, b).value == 0.0);
    }
}

TEST_CASE("exact alpha^2 homogeneity") {
    BathSpec b1 = bath_hi(0.15, 1000.0, 0.125);
    BathSpec b2 = bath_hi(0.15, 1000.0, 0.25);
    for (double tau : {0.3, 1.0, 2.7}) {
        CHECK(qbm::gamma_coeff(tau, b2) == 4.0 * qbm::gamma_coeff(tau, b1));
        CHECK(qbm::delta_coeff(tau, b2) == 4.0 * qbm::delta_coeff(tau, b1));
        CHECK(qbm::pi_coeff(tau, b2) == 4.0 * qbm::pi_coeff(tau, b1));
    }
    BathSpec l1 = bath_lo(0.5, 10.0, 0.125), l2 = bath_lo(0.5, 10.0, 0.25);
    CHECK(qbm::pi_coeff(1.5, l2) == 4.0 * qbm::pi_coeff(1.5, l1));
    CHECK_THAT(qbm::gamma_tilde(2.0, l2), WithinRel(4.0 * qbm::gamma_tilde(2.0, l1), 1e-12));
}

TEST_CASE("HighT linearity in theta_T; Gamma independent of it") {
    BathSpec b1 = bath_hi(0.5, 1000.0);
    BathSpec b2 = bath_hi(0.5, 2000.0);
    for (double tau : {0.4, 1.3, 4.0}) {
        CHECK(qbm::delta_coeff(tau, b2) == 2.0 * qbm::delta_coeff(tau, b1));
        CHECK(qbm::pi_coeff(tau, b2) == 2.0 * qbm::pi_coeff(tau, b1));
        CHECK(qbm::gamma_coeff(tau, b1) == qbm::gamma_coeff(tau, b2));
    }
}

TEST_CASE("closed forms match the quadrature oracle") {
    struct Case {
        CoeffKind kind;
        double tau;
        BathSpec bath;
    };
    const Case cases[] = {
        {CoeffKind::Gamma, 1.0, bath_hi(0.15)},
        {CoeffKind::Delta, 0.5, bath_hi(0.15, 1000.0)},
        {CoeffKind::Pi, 1.0, bath_hi(0.15, 1000.0)},
        {CoeffKind::Delta, 2.0, bath_lo(0.5, 10.0)},
        {CoeffKind::Pi, 2.0, bath_lo(0.5, 10.0)},
        {CoeffKind::Delta, 5.0, bath_lo(5.0, 1000.0)},
    };
    for (const auto& c : cases) {
        double closed;
        switch (c.kind) {
            case CoeffKind::Gamma: closed = qbm::gamma_coeff(c.tau, c.bath); break;
            case CoeffKind::Delta: closed = qbm::delta_coeff(c.tau, c.bath); break;
            default: closed = qbm::pi_coeff(c.tau, c.bath); break;
        }
        auto oracle = qbm::coeff_oracle(c.kind, c.tau, c.bath);
        INFO("kind " << static_cast<int>(c.kind) << " tau " << c.tau << " x " << c.bath.x);
        CHECK(std::abs(closed - oracle.value) <=
              1e-6 * std::max(std::abs(oracle.value), 1e-4));
    }
}

TEST_CASE("oracle cross-validated by an independent reduced scheme") {
    for (const auto& b : {bath_hi(0.15, 1000.0), bath_lo(0.5, 10.0)}) {
        for (CoeffKind kind : {CoeffKind::Gamma, CoeffKind::Delta, CoeffKind::Pi}) {
            double tau = 1.5;
            auto o = qbm::coeff_oracle(kind, tau, b);
            double r = reduced_1d(kind, tau, b);
            INFO("kind " << static_cast<int>(kind) << " x " << b.x);
            CHECK_THAT(o.value, WithinAbs(r, 1e-8 * std::max(1.0, std::abs(r))));
        }
    }
}

TEST_CASE("oracle Gamma ignores the temperature") {
    BathSpec b1 = bath_hi(0.5, 10.0), b2 = bath_hi(0.5, 1000.0);
    CHECK(qbm::coeff_oracle(CoeffKind::Gamma, 1.0, b1).value ==
          qbm::coeff_oracle(CoeffKind::Gamma, 1.0, b2).value);
}

TEST_CASE("gamma_tilde against a fine composite-Simpson reference") {
    BathSpec b = bath_hi(0.15);
    const double tau = 3.0;
    // composite Simpson, fixed step
    const int n = 3000;  // even
    const double h = tau / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * 2.0 * qbm::gamma_coeff(i * h, b);
    }
    acc *= h / 3.0;
    CHECK_THAT(qbm::gamma_tilde(tau, b), WithinAbs(acc, 1e-8));
}

TEST_CASE("imaginary residuals stay inside the certification threshold") {
    for (double x : {0.15, 0.5, 1.0, 5.0}) {
        for (double tau : {0.1, 1.0, 5.0, 10.0}) {
            for (auto regime : {Regime::HighT, Regime::LowT}) {
                for (double thT : {10.0, 1000.0}) {
                    BathSpec b = bath_hi(x, thT);
                    b.regime = regime;
                    auto g = qbm::gamma_coeff_ex(tau, b);
                    auto d = qbm::delta_coeff_ex(tau, b);
                    auto p = qbm::pi_coeff_ex(tau, b);
                    CHECK(g.imag_residual <= 1e-8 * std::max(1.0, std::abs(g.value)));
                    CHECK(d.imag_residual <= 1e-8 * std::max(1.0, std::abs(d.value)));
                    CHECK(p.imag_residual <= 1e-8 * std::max(1.0, std::abs(p.value)));
                }
            }
        }
    }
}

TEST_CASE("non-Markovianity quantifier on synthetic coefficients") {
    qbm::ChannelCoefficients c;
    c.delta = 0.3;
    CHECK(qbm::nonmarkovianity_from(c) == 0.0);
    c.delta = -0.1;
    CHECK(qbm::nonmarkovianity_from(c) == 1.0);
    c = {};
    CHECK_THROWS_AS(qbm::nonmarkovianity_from(c), qbm::IndeterminateError);
}

TEST_CASE("nonmarkovianity rejects tau = 0 and stays in [0, 1]") {
    BathSpec b = bath_hi();
    CHECK_THROWS_AS(qbm::nonmarkovianity(0.0, b), qbm::DomainError);
    for (double tau = 0.25; tau <= 5.0; tau += 0.25) {
        for (const auto& bb : {bath_hi(0.15), bath_hi(5.0), bath_lo(0.15), bath_lo(5.0)}) {
            double n = qbm::nonmarkovianity(tau, bb).n_value;
            CHECK(n >= 0.0);
            CHECK(n <= 1.0);
        }
    }
}

TEST_CASE("memory is stronger at small witness x") {
    auto max_n = [](const BathSpec& b) {
        double m = 0.0;
        for (double tau = 0.05; tau <= 5.0; tau += 0.05)
            m = std::max(m, qbm::nonmarkovianity(tau, b).n_value);
        return m;
    };
    CHECK(max_n(bath_hi(0.15)) > max_n(bath_hi(5.0)));
}

TEST_CASE("Markovian limit: N is small at x = 100") {
    BathSpec b = bath_hi(100.0);
    for (double tau = 0.5; tau <= 5.0; tau += 0.5)
        CHECK(qbm::nonmarkovianity(tau, b).n_value < 0.02);
}

TEST_CASE("closed forms reject non-Ohmic exponents") {
    BathSpec b = bath_hi();
    b.s = 0.5;
    CHECK_THROWS_AS(qbm::gamma_coeff(1.0, b), qbm::DomainError);
    CHECK_THROWS_AS(qbm::delta_coeff(1.0, b), qbm::DomainError);
    CHECK_THROWS_AS(qbm::pi_coeff(1.0, b), qbm::DomainError);
}

TEST_CASE("BathSpec invariants reported together") {
    BathSpec b;
    b.x = -1.0;
    b.theta_T = 0.0;
    try {
        b.validate();
        FAIL("expected ValidationError");
    } catch (const qbm::ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("x") != std::string::npos);
        CHECK(msg.find("theta_T") != std::string::npos);
    }
}

TEST_CASE("negative tau rejected") {
    CHECK_THROWS_AS(qbm::gamma_coeff(-0.5, bath_hi()), qbm::DomainError);
    CHECK_THROWS_AS(qbm::coeff_oracle(CoeffKind::Pi, -1.0, bath_hi()), qbm::DomainError);
}
