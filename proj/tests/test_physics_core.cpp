#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "flexwave/physics_core.hpp"

using namespace flexwave;

namespace {

// Centered fourth-order first derivative of a callable.
template <class F>
double fd1(F&& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Ice pressure written as κ_ss + κ³/2 with arclength derivatives, evaluated by
// finite differences from the analytic η, η_x, η_xx of a cosine profile.
double pressure_by_differences(const SpectralProfile& p, double x) {
    auto deriv = [&](double t, int order) {
        double s = 0.0;
        for (std::size_t j = 1; j <= p.modes(); ++j) {
            const double k = static_cast<double>(j);
            const double a = p.coefficient(j);
            switch (order) {
                case 1: s += -a * k * std::sin(k * t); break;
                case 2: s += -a * k * k * std::cos(k * t); break;
                default: s += a * std::cos(k * t);
            }
        }
        return s;
    };
    auto metric = [&](double t) { return std::sqrt(1.0 + std::pow(deriv(t, 1), 2)); };
    auto kappa = [&](double t) { return deriv(t, 2) / std::pow(metric(t), 3); };
    const double h = 1e-3;
    auto kappa_s = [&](double t) { return fd1(kappa, t, h) / metric(t); };
    const double k = kappa(x);
    return fd1(kappa_s, x, h) / metric(x) + 0.5 * k * k * k;
}

}  // namespace

TEST(Depth, InfiniteAndFinite) {
    const Depth inf = Depth::infinite();
    EXPECT_TRUE(inf.is_infinite());
    EXPECT_EQ(inf.tanh_of(3.0), 1.0);
    EXPECT_EQ(inf.tanh_of(-0.2), -1.0);
    EXPECT_EQ(inf.tanh_of(0.0), 0.0);
    EXPECT_THROW(inf.value(), DomainError);

    const Depth h = Depth::finite(0.05);
    EXPECT_DOUBLE_EQ(h.value(), 0.05);
    EXPECT_DOUBLE_EQ(h.tanh_of(2.0), std::tanh(0.1));
    EXPECT_THROW(Depth::finite(-1.0), DomainError);
    EXPECT_THROW(Depth::finite(0.0), DomainError);
}

TEST(Depth, ParseRoundTrip) {
    EXPECT_TRUE(Depth::parse("inf").is_infinite());
    EXPECT_TRUE(Depth::parse(Depth::infinite().to_string()).is_infinite());
    EXPECT_EQ(Depth::parse(Depth::finite(0.05).to_string()), Depth::finite(0.05));
    EXPECT_THROW(Depth::parse("deep"), Error);
}

TEST(IceModelNames, RoundTrip) {
    for (IceModel m : {IceModel::LinearBiharmonic, IceModel::NonlinearCosserat}) {
        EXPECT_EQ(parse_ice_model(to_string(m)), m);
    }
    EXPECT_THROW(parse_ice_model("plastic"), Error);
}

TEST(PhysicalParams, Validation) {
    PhysicalParams p;
    EXPECT_NO_THROW(p.validate());
    p.g = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p.g = 1.0;
    p.D = -0.1;
    EXPECT_THROW(p.validate(), Error);
}

TEST(EvalProfile, ZeroProfile) {
    const auto v = eval_profile(SpectralProfile(std::vector<double>{0.0, 0.0, 0.0}), 8);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], 0.0);
}

TEST(EvalProfile, CosineSamples) {
    const auto v = eval_profile(SpectralProfile({1.0}), 4);
    EXPECT_NEAR(v[0], 1.0, 1e-15);
    EXPECT_NEAR(v[1], 0.0, 1e-15);
    EXPECT_NEAR(v[2], -1.0, 1e-15);
    EXPECT_NEAR(v[3], 0.0, 1e-15);
}

TEST(EvalProfile, TwoModesAtPi) {
    const auto v = eval_profile(SpectralProfile({0.1, 0.01}), 8);
    EXPECT_NEAR(v[4], -0.09, 1e-15);
}

TEST(EvalProfile, AliasingSignalled) {
    EXPECT_THROW(eval_profile(SpectralProfile(std::vector<double>(8, 0.1)), 16), AliasingError);
    EXPECT_NO_THROW(eval_profile(SpectralProfile(std::vector<double>(7, 0.1)), 16));
}

TEST(EvalProfile, ProjectionRoundTrip) {
    const SpectralProfile p({0.3, -0.02, 5e-3, 1e-4, -7e-6});
    const auto back = cosine_projection(eval_profile(p, 64), p.modes());
    for (std::size_t j = 1; j <= p.modes(); ++j) EXPECT_NEAR(back.coefficient(j), p.coefficient(j), 1e-14);
}

TEST(SpectralProfile, CoefficientOutOfRangeIsZero) {
    const SpectralProfile p({0.1, 0.2});
    EXPECT_EQ(p.coefficient(0), 0.0);
    EXPECT_EQ(p.coefficient(3), 0.0);
    EXPECT_DOUBLE_EQ(p.max_abs_coefficient(), 0.2);
}

TEST(SpectralDerivative, Calculus) {
    const std::size_t m = 64;
    const auto d1 = spectral_derivative(SpectralProfile({1.0}), 1, m);
    const auto d4 = spectral_derivative(SpectralProfile({0.0, 1.0}), 4, m);
    const auto d4b = spectral_derivative(SpectralProfile({1.0}), 4, m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = d1.x(i);
        EXPECT_NEAR(d1[i], -std::sin(x), 1e-14);
        EXPECT_NEAR(d4[i], 16.0 * std::cos(2.0 * x), 1e-12);
        EXPECT_NEAR(d4b[i], std::cos(x), 1e-14);
    }
    EXPECT_THROW(spectral_derivative(SpectralProfile({1.0}), 6, m), DomainError);
}

TEST(DefaultGrid, Sizes) {
    EXPECT_EQ(default_grid_size(4), 64u);
    EXPECT_EQ(default_grid_size(16), 64u);
    EXPECT_EQ(default_grid_size(20), 128u);
    EXPECT_EQ(default_grid_size(20, 8), 256u);
}

TEST(PFlex, FlatIsZero) {
    const SpectralProfile flat({0.0, 0.0});
    for (IceModel m : {IceModel::LinearBiharmonic, IceModel::NonlinearCosserat}) {
        EXPECT_EQ(p_flex(flat, m, 64).max_abs(), 0.0);
    }
}

TEST(PFlex, LinearModelIsFourthDerivative) {
    const auto v = p_flex(SpectralProfile({0.2}), IceModel::LinearBiharmonic, 64);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], 0.2 * std::cos(v.x(i)), 1e-14);
}

TEST(PFlex, NonlinearMatchesFiniteDifferenceOracle) {
    for (const SpectralProfile& p :
         {SpectralProfile({0.01}), SpectralProfile({0.3, 0.05, -0.01}), SpectralProfile({0.2, 0.0, 0.04})}) {
        const std::size_t m = 128;
        const auto v = p_flex(p, IceModel::NonlinearCosserat, m);
        const double scale = v.max_abs();
        for (std::size_t i = 0; i < m; i += 7) {
            EXPECT_NEAR(v[i], pressure_by_differences(p, v.x(i)), 1e-7 * scale) << "x=" << v.x(i);
        }
    }
}

TEST(PFlex, SmallAmplitudeAgreementIsCubic) {
    // Relative difference between the models scales like a²; the fitted constant is stable.
    std::vector<double> constants;
    double gap_at_largest = 0.0;
    for (double a : {1e-2, 1e-3, 1e-4}) {
        const SpectralProfile p({a});
        const auto lin = p_flex(p, IceModel::LinearBiharmonic, 64);
        const auto non = p_flex(p, IceModel::NonlinearCosserat, 64);
        double diff = 0.0;
        for (std::size_t i = 0; i < lin.size(); ++i) diff = std::max(diff, std::abs(lin[i] - non[i]));
        constants.push_back(diff / lin.max_abs() / (a * a));
        if (a == 1e-2) gap_at_largest = diff;
    }
    // Absolute gap is O(a³): about 4e-6 at a = 0.01.
    EXPECT_LT(gap_at_largest, 1e-5);
    EXPECT_NEAR(constants[1] / constants[0], 1.0, 1e-2);
    EXPECT_NEAR(constants[2] / constants[1], 1.0, 1e-2);
}

TEST(PFlex, EvenProfileGivesEvenPressure) {
    const SpectralProfile p({0.3, 0.05, -0.01});
    const std::size_t m = 128;
    for (IceModel model : {IceModel::LinearBiharmonic, IceModel::NonlinearCosserat}) {
        const auto v = p_flex(p, model, m);
        // Rounding in the high modes is amplified by the outer derivatives.
        for (std::size_t i = 1; i < m; ++i) EXPECT_NEAR(v[i], v[m - i], 1e-9 * v.max_abs());
    }
}

TEST(Qx, FlatIsZero) {
    TravelingWave w{SpectralProfile({0.0}), 0.7, {}, IceModel::NonlinearCosserat};
    EXPECT_NEAR(qx_from_profile(w, 64).max_abs(), 0.0, 1e-15);
}

TEST(Qx, SmallAmplitudeLeadingOrder) {
    const double a = 1e-3;
    TravelingWave w{SpectralProfile({a}), 1.0, {}, IceModel::LinearBiharmonic};
    const auto q = qx_from_profile(w, 64);
    double err = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) err = std::max(err, std::abs(q[i] - a * std::cos(q.x(i))));
    EXPECT_LT(err, 1e-5);
}

TEST(Qx, EvenProfileGivesEvenVelocity) {
    PhysicalParams params;
    params.D = 0.1;
    TravelingWave w{SpectralProfile({0.05, 0.01}), 1.1, params, IceModel::NonlinearCosserat};
    const auto q = qx_from_profile(w, 64);
    for (std::size_t i = 1; i < q.size(); ++i) EXPECT_NEAR(q[i], q[q.size() - i], 1e-11 * q.max_abs());
}

TEST(Qx, NegativeRadicand) {
    TravelingWave w{SpectralProfile({0.5}), 0.1, {}, IceModel::LinearBiharmonic};
    EXPECT_THROW(qx_from_profile(w, 64), NonpositiveRadicand);
}
