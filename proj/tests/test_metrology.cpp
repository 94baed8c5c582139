#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qbm/metrology.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using qbm::BathSpec;
using qbm::EstimationTarget;
using qbm::Mat2;
using qbm::ProbeSpec;
using qbm::Regime;

namespace {

BathSpec make_bath(double x, double thT, Regime r, double alpha = 0.1) {
    BathSpec b;
    b.x = x;
    b.theta_T = thT;
    b.regime = r;
    b.alpha = alpha;
    return b;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("moment-level QFI assembly") {
    qbm::CovMatrix vac{0.5, 0.0, 0.5};
    // displacement term: sigma = I/2, dd = (1,0) -> 2 * dd^T sigma^{-1} dd = 4
    auto r = qbm::metrology_detail::qfi_from_moments(vac, Mat2{}, {0.0, 0.0}, {1.0, 0.0}, 0.0);
    CHECK_THAT(r.term_disp, WithinRel(4.0, 1e-14));
    CHECK(r.term_cov == 0.0);
    CHECK(r.term_purity == 0.0);
    CHECK_THAT(r.f_value, WithinRel(r.term_cov + r.term_purity + r.term_disp, 1e-12));

    // mixed state: purity term finite
    qbm::CovMatrix mixed{1.0, 0.0, 1.0};
    Mat2 dsig{0.3, 0.0, 0.0, 0.3};
    auto m = qbm::metrology_detail::qfi_from_moments(mixed, dsig, {0.0, 0.0}, {0.0, 0.0}, 0.0);
    CHECK(m.term_purity > 0.0);
    CHECK_THAT(m.f_value, WithinRel(m.term_cov + m.term_purity + m.term_disp, 1e-12));

    // pure state with purity-changing derivative is genuinely singular
    Mat2 expanding{0.5, 0.0, 0.0, 0.5};
    CHECK_THROWS_AS(
        qbm::metrology_detail::qfi_from_moments(vac, expanding, {0.0, 0.0}, {0.0, 0.0}, 0.0),
        qbm::SingularPurityError);
}

TEST_CASE("gamma derivative at tau = 0 is the initial-state derivative") {
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    for (double g : {0.0, 1.0, -2.0}) {
        Mat2 d = qbm::partial_sigma(EstimationTarget::CorrelationGamma, {g}, b, 0.0);
        CHECK_THAT(d.a11, WithinAbs(0.0, 1e-15));
        CHECK_THAT(d.a12, WithinAbs(0.5, 1e-15));
        CHECK_THAT(d.a21, WithinAbs(0.5, 1e-15));
        CHECK_THAT(d.a22, WithinAbs(g, 1e-15));
    }
}

TEST_CASE("temperature derivative vanishes at zero coupling") {
    BathSpec free = make_bath(0.5, 100.0, Regime::HighT, 0.0);
    Mat2 d = qbm::partial_sigma(EstimationTarget::Temperature, {1.0}, free, 2.0);
    CHECK_THAT(d.a11, WithinAbs(0.0, 1e-12));
    CHECK_THAT(d.a12, WithinAbs(0.0, 1e-12));
    CHECK_THAT(d.a22, WithinAbs(0.0, 1e-12));
}

TEST_CASE("analytic and finite-difference gamma derivatives agree") {
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    const double tau = 1.0, g = 1.0, h = 1e-5;
    Mat2 analytic = qbm::partial_sigma(EstimationTarget::CorrelationGamma, {g}, b, tau);

    // independent central difference through the full evolution
    auto sp = qbm::evolve(qbm::initial_correlated_state({g + h}), tau, b);
    auto sm = qbm::evolve(qbm::initial_correlated_state({g - h}), tau, b);
    Mat2 fd = (sp.sigma.mat() - sm.sigma.mat()) * (1.0 / (2.0 * h));
    CHECK_THAT(analytic.a11, WithinAbs(fd.a11, 1e-8));
    CHECK_THAT(analytic.a12, WithinAbs(fd.a12, 1e-8));
    CHECK_THAT(analytic.a22, WithinAbs(fd.a22, 1e-8));
}

TEST_CASE("HighT temperature derivative equals T(tau)/theta_T") {
    // sigma depends on theta_T only through the noise, linearly, in HighT
    BathSpec b = make_bath(0.5, 1000.0, Regime::HighT);
    const double tau = 1.5;
    Mat2 d = qbm::partial_sigma(EstimationTarget::Temperature, {0.0}, b, tau);
    auto T = qbm::noise_matrix(tau, b);
    CHECK_THAT(d.a11, WithinAbs(T.m11 / b.theta_T, 1e-6 * std::abs(T.m11 / b.theta_T) + 1e-12));
    CHECK_THAT(d.a22, WithinAbs(T.m22 / b.theta_T, 1e-6 * std::abs(T.m22 / b.theta_T) + 1e-12));
}

TEST_CASE("finite-difference step leaving the domain is rejected") {
    BathSpec b = make_bath(0.15, 1e-10, Regime::HighT);
    qbm::FdSpec fd;
    fd.min_step = 1e-9;  // larger than theta_T itself
    CHECK_THROWS_AS(qbm::partial_sigma(EstimationTarget::Temperature, {0.0}, b, 1.0, fd),
                    qbm::DomainError);
}

TEST_CASE("QFI basics across targets") {
    BathSpec free = make_bath(0.5, 100.0, Regime::HighT, 0.0);
    for (double tau : {0.0, 1.0, 3.0}) {
        auto r = qbm::qfi(EstimationTarget::Temperature, {1.0}, free, tau);
        CHECK_THAT(r.f_value, WithinAbs(0.0, 1e-9));
        CHECK(r.term_disp == 0.0);
    }

    // pure-state guard: tau = 0 is exactly pure, purity term must vanish
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    for (auto target : {EstimationTarget::Temperature, EstimationTarget::WitnessX,
                        EstimationTarget::CorrelationGamma}) {
        auto r0 = qbm::qfi(target, {1.0}, b, 0.0);
        CHECK(r0.term_purity == 0.0);
        CHECK(r0.term_disp == 0.0);
    }
}

TEST_CASE("term accounting and non-negativity on a parameter sample") {
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    for (double tau : {0.5, 1.0, 2.5}) {
        for (auto target : {EstimationTarget::Temperature, EstimationTarget::WitnessX,
                            EstimationTarget::CorrelationGamma}) {
            auto r = qbm::qfi(target, {1.0}, b, tau);
            CHECK_THAT(r.f_value,
                       WithinAbs(r.term_cov + r.term_purity + r.term_disp,
                                 1e-12 * std::max(1.0, std::abs(r.f_value))));
            CHECK(r.f_value >= -1e-9);
        }
    }
}

TEST_CASE("witness QFI oscillates in the strong-memory regime") {
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    auto curve = qbm::qfi_curve(EstimationTarget::WitnessX, {0.0}, b, linspace(0.0, 5.0, 101));
    int sign_changes = 0, prev = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        double d = curve[i].f_value - curve[i - 1].f_value;
        if (std::abs(d) < 1e-14) continue;
        int s = d > 0 ? 1 : -1;
        if (prev != 0 && s != prev) ++sign_changes;
        prev = s;
    }
    CHECK(sign_changes >= 1);
}

TEST_CASE("FD step halving sits on the plateau") {
    BathSpec b = make_bath(0.15, 1000.0, Regime::HighT);
    qbm::FdSpec fd;
    auto r1 = qbm::qfi(EstimationTarget::WitnessX, {1.0}, b, 2.0, fd);
    fd.rel_step *= 0.5;
    auto r2 = qbm::qfi(EstimationTarget::WitnessX, {1.0}, b, 2.0, fd);
    CHECK(std::abs(r2.f_value - r1.f_value) < 1e-4 * std::max(1.0, std::abs(r1.f_value)));
}

TEST_CASE("Cramer-Rao bound") {
    CHECK_THAT(qbm::qcrb(4.0, 1), WithinRel(0.5, 1e-15));
    CHECK_THAT(qbm::qcrb(100.0, 25), WithinRel(0.02, 1e-15));
    CHECK_THAT(qbm::qcrb(7.0, 10) / qbm::qcrb(7.0, 20), WithinRel(std::sqrt(2.0), 1e-13));
    CHECK_THROWS_AS(qbm::qcrb(0.0, 3), qbm::DomainError);
    CHECK_THROWS_AS(qbm::qcrb(-1.0, 3), qbm::DomainError);
    CHECK_THROWS_AS(qbm::qcrb(4.0, 0), qbm::DomainError);
}

TEST_CASE("shot-noise-limit gain") {
    BathSpec b = make_bath(0.15, 10.0, Regime::LowT);
    CHECK(qbm::snl_gain(EstimationTarget::WitnessX, 0.0, b, 1.5) == 1.0);

    double best = 0.0;
    for (double tau : {1.0, 2.0, 3.0, 4.0, 5.0})
        best = std::max(best, qbm::snl_gain(EstimationTarget::WitnessX, 2.0, b, tau));
    CHECK(best > 1.0);

    // zero reference surfaced as an error
    BathSpec free = make_bath(0.5, 100.0, Regime::HighT, 0.0);
    CHECK_THROWS_AS(qbm::snl_gain(EstimationTarget::Temperature, 1.0, free, 1.0),
                    qbm::DomainError);
}

TEST_CASE("FdSpec invariants") {
    qbm::FdSpec fd;
    fd.rel_step = 0.5;
    CHECK_THROWS_AS(qbm::qfi(EstimationTarget::WitnessX, {0.0},
                             make_bath(0.15, 1000.0, Regime::HighT), 1.0, fd),
                    qbm::ValidationError);
}
