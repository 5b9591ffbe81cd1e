#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "flexwave/linear_theory.hpp"

using namespace flexwave;

namespace {

PhysicalParams deep(double D, double g = 1.0) {
    PhysicalParams p;
    p.g = g;
    p.D = D;
    return p;
}

PhysicalParams shallow(double D, double h) {
    PhysicalParams p;
    p.D = D;
    p.h = Depth::finite(h);
    return p;
}

constexpr IceModel kModels[] = {IceModel::LinearBiharmonic, IceModel::NonlinearCosserat};

}  // namespace

TEST(Dispersion, UnitValues) {
    EXPECT_DOUBLE_EQ(dispersion(1.0, deep(0.0)), 1.0);
    EXPECT_NEAR(dispersion(1.0, deep(1.0)), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(dispersion(2.0, deep(0.0)), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(dispersion(2.0, shallow(0.0, 10.0)), std::sqrt(2.0), 1e-15);
    EXPECT_THROW(dispersion(0.0, deep(0.1)), DomainError);
}

TEST(Dispersion, EvenInWavenumber) {
    for (double k : {0.3, 1.0, 2.7}) {
        EXPECT_DOUBLE_EQ(dispersion(-k, deep(0.2)), dispersion(k, deep(0.2)));
        EXPECT_DOUBLE_EQ(dispersion(-k, shallow(0.2, 0.5)), dispersion(k, shallow(0.2, 0.5)));
    }
}

TEST(Dispersion, JetMatchesFiniteDifferences) {
    for (const PhysicalParams& p : {deep(0.01), deep(25.0), shallow(0.3, 0.05), shallow(1e-5, 2.0)}) {
        for (double k : {0.5, 1.0, 3.0}) {
            const auto jet = dispersion_jet(k, p);
            const double h = 1e-4;
            const double wp = dispersion(k + h, p), wm = dispersion(k - h, p), w0 = dispersion(k, p);
            EXPECT_NEAR(jet.omega, w0, 1e-14 * w0);
            EXPECT_NEAR(jet.omega_p, (wp - wm) / (2 * h), 1e-7 * std::max(1.0, std::abs(jet.omega_p)));
            EXPECT_NEAR(jet.omega_pp, (wp - 2 * w0 + wm) / (h * h), 1e-5 * std::max(1.0, std::abs(jet.omega_pp)));
        }
    }
    EXPECT_THROW(dispersion_jet(0.0, deep(0.1)), DomainError);
}

TEST(Nls, DeepWaterJetAgrees) {
    for (double D : {0.0, 0.01, 0.3, 25.0}) {
        const auto c = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(D));
        const auto jet = dispersion_jet(1.0, deep(D));
        EXPECT_NEAR(c.omega * c.omega, 1.0 + D, 1e-12);
        EXPECT_NEAR(c.omega_p, jet.omega_p, 1e-12);
        EXPECT_NEAR(c.omega_pp, jet.omega_pp, 1e-12 * std::max(1.0, std::abs(jet.omega_pp)));
    }
}

TEST(Nls, GravityLimit) {
    for (IceModel m : kModels) {
        const auto c = nls_coefficients(m, 1, deep(0.0));
        EXPECT_DOUBLE_EQ(c.omega_pp, -0.25);
        EXPECT_DOUBLE_EQ(c.M, -2.0);
        EXPECT_TRUE(c.focusing());
    }
}

TEST(Nls, CurvatureSignChange) {
    const double star = omega_pp_sign_change_rigidity(1.0);
    EXPECT_NEAR(star, (-30.0 + std::sqrt(960.0)) / 30.0, 1e-15);
    EXPECT_NEAR(15 * star * star + 30 * star - 1, 0.0, 1e-14);
    const auto below = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(star - 1e-4));
    const auto above = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(star + 1e-4));
    EXPECT_LT(below.omega_pp, 0.0);
    EXPECT_GT(above.omega_pp, 0.0);
}

TEST(Nls, CurvatureSignLock) {
    for (double D : {0.0, 0.01, 0.05, 0.3, 25.0}) {
        for (int k : {1, 2, 3}) {
            const auto c = nls_coefficients(IceModel::NonlinearCosserat, k, deep(D));
            const double x = std::pow(k, 4) * D;
            EXPECT_GT(c.omega_p, 0.0);
            EXPECT_LT(c.omega_pp * (1 - 30 * x - 15 * x * x), 0.0);
        }
    }
}

TEST(Nls, WiltonPole) {
    for (IceModel m : kModels) {
        EXPECT_THROW(nls_coefficients(m, 1, deep(1.0 / 14.0)), WiltonPole);
        EXPECT_GT(std::abs(nls_coefficients(m, 1, deep(1.0 / 14.0 + 1e-6)).M), 1e4);
        EXPECT_GT(std::abs(nls_coefficients(m, 1, deep(1.0 / 14.0 - 1e-6)).M), 1e4);
    }
}

TEST(Nls, FiniteDepthRejected) {
    EXPECT_THROW(nls_coefficients(IceModel::LinearBiharmonic, 1, shallow(0.1, 1.0)), FiniteDepthUnsupported);
}

TEST(Modulation, RegimeTable) {
    const std::pair<double, Modulation> rows[] = {{0.01, Modulation::Focusing},
                                                  {0.05, Modulation::Defocusing},
                                                  {0.1, Modulation::Focusing},
                                                  {0.3, Modulation::Defocusing}};
    for (const auto& [D, expected] : rows) {
        for (IceModel m : kModels) EXPECT_EQ(classify_modulational(m, 1, deep(D)), expected) << "D=" << D;
    }
}

TEST(Modulation, StiffSheetFollowsFormulas) {
    const auto lin = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(25.0));
    const auto non = nls_coefficients(IceModel::NonlinearCosserat, 1, deep(25.0));
    EXPECT_GT(lin.omega_pp, 0.0);
    EXPECT_LT(lin.M, 0.0);
    EXPECT_GT(non.M, 0.0);
    EXPECT_EQ(classify_modulational(IceModel::LinearBiharmonic, 1, deep(25.0)), Modulation::Defocusing);
    EXPECT_EQ(classify_modulational(IceModel::NonlinearCosserat, 1, deep(25.0)), Modulation::Focusing);
}

TEST(Modulation, InvariantUnderJointRescaling) {
    for (double D : {0.01, 0.05, 0.1, 0.3, 25.0}) {
        for (IceModel m : kModels) {
            const auto base = classify_modulational(m, 1, deep(D));
            for (double s : {0.5, 2.0}) EXPECT_EQ(classify_modulational(m, 1, deep(s * D, s)), base);
        }
    }
}

TEST(GrowthRate, Shape) {
    const auto c = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(0.01));
    const double a = 0.01;
    EXPECT_EQ(growth_rate(0.0, a, c).omega, 0.0);
    EXPECT_FALSE(growth_rate(0.0, a, c).stable);

    const double mu_max = most_unstable_sideband(a, c);
    EXPECT_NEAR(mu_max, a * std::sqrt(2 * c.M / c.omega_pp), 1e-15);
    EXPECT_NEAR(growth_rate(mu_max, a, c).omega, std::abs(c.M) * a * a, 1e-14);

    const double edge = 2 * a * std::sqrt(c.M / c.omega_pp);
    EXPECT_NEAR(growth_rate(edge, a, c).omega, 0.0, 1e-9);
    EXPECT_FALSE(growth_rate(edge, a, c).stable);
    EXPECT_TRUE(growth_rate(1.01 * edge, a, c).stable);

    for (double mu : {0.3 * mu_max, 0.9 * mu_max, 1.3 * mu_max}) {
        const double w = growth_rate(mu, a, c).omega;
        const double half = 0.5 * c.omega_pp;
        EXPECT_NEAR(w * w + half * half * std::pow(mu, 4) - c.omega_pp * c.M * a * a * mu * mu, 0.0, 1e-18);
    }
}

TEST(GrowthRate, DefocusingHasNoBand) {
    const auto c = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(0.05));
    EXPECT_EQ(most_unstable_sideband(0.01, c), 0.0);
    EXPECT_TRUE(growth_rate(1e-3, 0.01, c).stable);
}

TEST(BranchSpeed, Values) {
    const auto c0 = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(0.0));
    EXPECT_NEAR(c_nls(0.1, c0, deep(0.0)), 1.02, 1e-15);
    const auto c1 = nls_coefficients(IceModel::NonlinearCosserat, 1, deep(0.3));
    EXPECT_DOUBLE_EQ(c_nls(0.0, c1, deep(0.3)), std::sqrt(1.3));
    // Speed offset sign follows the branch direction: right when M < 0.
    for (double D : {0.01, 0.05, 0.1, 0.3}) {
        const auto c = nls_coefficients(IceModel::LinearBiharmonic, 1, deep(D));
        EXPECT_EQ(c_nls(0.01, c, deep(D)) > c.omega, c.M < 0.0);
    }
    EXPECT_THROW(c_nls(0.1, nls_coefficients(IceModel::LinearBiharmonic, 2, deep(0.0)), deep(0.0)), DomainError);
}

TEST(SecondHarmonic, Values) {
    EXPECT_EQ(second_harmonic(0.0, 1, deep(0.2)), std::complex<double>(0.0));
    EXPECT_NEAR(std::abs(second_harmonic(1e-3, 1, deep(0.0)) - 1e-6), 0.0, 1e-20);
    EXPECT_THROW(second_harmonic(1e-3, 1, deep(1.0 / 14.0)), WiltonPole);
    // Simple pole: halving the distance to the resonant rigidity doubles the response.
    const double near = std::abs(second_harmonic(1e-3, 1, deep(1.0 / 14.0 + 1e-7)));
    const double nearer = std::abs(second_harmonic(1e-3, 1, deep(1.0 / 14.0 + 5e-8)));
    EXPECT_GT(near, 1e5 * 1e-6);
    EXPECT_NEAR(nearer / near, 2.0, 1e-3);
}

TEST(Resonance, KnownRigidities) {
    EXPECT_NEAR(resonant_rigidity(2, deep(0.0)), 1.0 / 14.0, 1e-16);
    EXPECT_NEAR(resonant_rigidity(3, deep(0.0)), 1.0 / 39.0, 1e-16);
    EXPECT_NEAR(resonant_rigidity(7, shallow(0.0, 0.05)), 1.65e-5, 0.01 * 1.65e-5);
    EXPECT_NEAR(resonant_rigidity(10, shallow(0.0, 0.05)), 8.11e-6, 0.01 * 8.11e-6);
    EXPECT_THROW(resonant_rigidity(1, deep(0.0)), DomainError);
}

TEST(Resonance, ResidualVanishesAtRoot) {
    for (int K : {2, 5, 7, 10}) {
        for (PhysicalParams p : {deep(0.0), shallow(0.0, 0.05), shallow(0.0, 1.0)}) {
            p.D = resonant_rigidity(K, p);
            EXPECT_LT(std::abs(resonance_residual(K, p)), 1e-12);
        }
    }
}

TEST(FlatEigenvalues, Basics) {
    const auto [p0, m0] = flat_eigenvalues(0.0, 0, 1.3, deep(0.2));
    EXPECT_EQ(p0, std::complex<double>(0.0));
    EXPECT_EQ(m0, std::complex<double>(0.0));

    for (double mu : {-0.4, 0.1, 0.37}) {
        for (int m = -3; m <= 3; ++m) {
            const auto [lp, lm] = flat_eigenvalues(mu, m, 0.0, shallow(0.3, 0.05));
            EXPECT_EQ(lp, -lm);
            EXPECT_EQ(lp.real(), 0.0);
            const auto [dp, dm] = flat_eigenvalues(mu, m, 1.7, deep(25.0));
            EXPECT_EQ(dp.real(), 0.0);
            EXPECT_EQ(dm.real(), 0.0);
        }
    }
    const auto [bp, bm] = flat_eigenvalues(0.0, 1, std::sqrt(1.1), deep(0.1));
    EXPECT_NEAR(std::abs(bm), 0.0, 1e-15);
    EXPECT_NEAR(bp.imag(), 2 * std::sqrt(1.1), 1e-15);
}

TEST(Collisions, ResonanceIsZeroFloquetCollision) {
    for (int K : {2, 7, 10}) {
        PhysicalParams p = K == 2 ? deep(0.0) : shallow(0.0, 0.05);
        p.D = resonant_rigidity(K, p);
        const auto hits = find_collisions(p, bifurcation_speed(p));
        bool found = false;
        for (const auto& r : hits) {
            if (std::abs(r.mu) < 1e-8 && std::abs(r.m1 - r.m2) == K - 1) found = true;
        }
        EXPECT_TRUE(found) << "K=" << K;
    }
}

TEST(Collisions, RecordsAreGenuineCrossings) {
    const PhysicalParams p = deep(0.3);
    const double c = bifurcation_speed(p);
    for (const auto& r : find_collisions(p, c)) {
        EXPECT_TRUE(r.m1 != r.m2 || r.s1 != r.s2);
        const auto a = flat_eigenvalues(r.mu, r.m1, c, p);
        const auto b = flat_eigenvalues(r.mu, r.m2, c, p);
        const auto la = r.s1 > 0 ? a.first : a.second;
        const auto lb = r.s2 > 0 ? b.first : b.second;
        EXPECT_LT(std::abs(la - lb), 1e-8);
        EXPECT_LT(std::abs(la - r.lambda), 1e-8);
    }
}

TEST(Collisions, StifferSheetCrossingsBunchNearZeroFloquet) {
    // Nonzero crossings near the spectral origin: spread in μ for a soft sheet, bunched for a stiff one.
    auto widest_mu = [](double D) {
        const PhysicalParams p = deep(D);
        double widest = 0.0;
        for (const auto& r : find_collisions(p, bifurcation_speed(p))) {
            if (std::abs(r.lambda) > 1e-8 && std::abs(r.lambda) < 0.5) widest = std::max(widest, std::abs(r.mu));
        }
        return widest;
    };
    const double stiff = widest_mu(25.0);
    const double soft = widest_mu(0.1);
    EXPECT_GT(stiff, 0.0);
    EXPECT_LT(stiff, 0.01);
    EXPECT_GT(soft, 10.0 * stiff);
}

TEST(Collisions, StationaryFrameTrivialCollision) {
    const auto hits = find_collisions(deep(0.1), 0.0);
    bool trivial = false;
    for (const auto& r : hits) {
        if (std::abs(r.mu + r.m1) < 1e-8 && r.m1 == r.m2 && std::abs(r.lambda) < 1e-8) trivial = true;
    }
    EXPECT_TRUE(trivial);
}

TEST(BifurcationSpeed, Depths) {
    EXPECT_DOUBLE_EQ(bifurcation_speed(deep(0.3)), std::sqrt(1.3));
    EXPECT_NEAR(bifurcation_speed(shallow(0.3, 0.05)), std::sqrt(std::tanh(0.05) * 1.3), 1e-15);
}
