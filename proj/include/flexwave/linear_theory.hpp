#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "flexwave/physics_core.hpp"

namespace flexwave {

/// Linear dispersion relation ω(k) = sqrt((g k + D k⁵) tanh(k h)), positive branch.
double dispersion(double k, const PhysicalParams& params);

struct DispersionJet {
    double omega = 0.0;
    double omega_p = 0.0;
    double omega_pp = 0.0;
};

/// ω and its first two k-derivatives, any depth. k must be positive.
DispersionJet dispersion_jet(double k, const PhysicalParams& params);

/// Speed at which the k=1 branch leaves flat water: sqrt(tanh(h)(g + D)).
double bifurcation_speed(const PhysicalParams& params);

/// Coefficients of the envelope equation i η_τ + (ω''/2) η_ξξ + M|η|²η = 0
/// for a deep-water carrier of wavenumber k. The envelope amplitude is half the
/// cosine amplitude of the physical profile (η = η₁e^{iθ} + c.c.).
struct NlsCoefficients {
    double omega = 0.0;
    double omega_p = 0.0;  ///< group velocity
    double omega_pp = 0.0;
    double M = 0.0;
    int k = 1;

    bool focusing() const { return omega_pp * M > 0.0; }
};

/// Relative tolerance on |g − 14k⁴D| / g below which the Wilton pole is reported.
inline constexpr double kWiltonPoleTolerance = 1e-8;

NlsCoefficients nls_coefficients(IceModel model, int k, const PhysicalParams& params,
                                 double pole_tolerance = kWiltonPoleTolerance);

/// Rigidity at which ω'' changes sign: positive root of 15x² + 30gx − g² = 0, x = k⁴D.
double omega_pp_sign_change_rigidity(double g, int k = 1);

enum class Modulation { Focusing, Defocusing };

Modulation classify_modulational(IceModel model, int k, const PhysicalParams& params);

/// Ω(μ) from Ω² = ω''Ma²μ² − (ω''/2)²μ⁴. `stable` marks Ω² < 0 (outside the band).
struct GrowthRate {
    double omega = 0.0;
    bool stable = false;
};

GrowthRate growth_rate(double mu, double a, const NlsCoefficients& coeffs);

/// Sideband wavenumber of the fastest growth, a·sqrt(2M/ω''). Zero when defocusing.
double most_unstable_sideband(double a, const NlsCoefficients& coeffs);

/// Speed of the k=1 branch predicted by the envelope equation, ω − M a².
double c_nls(double a, const NlsCoefficients& coeffs, const PhysicalParams& params);

/// Leading-order second harmonic η₂ = (g + k⁴D)/(g − 14k⁴D) |k| η₁².
std::complex<double> second_harmonic(std::complex<double> eta1, int k, const PhysicalParams& params,
                                     double pole_tolerance = kWiltonPoleTolerance);

/// Rigidity D for which mode K is resonant with the fundamental:
/// (g + D) K tanh(h) − (g + K⁴D) tanh(Kh) = 0.
double resonant_rigidity(int K, const PhysicalParams& params);

/// Left side of the resonance condition, for checks.
double resonance_residual(int K, const PhysicalParams& params);

/// Zero-amplitude eigenvalues λ± = i c κ ± i sqrt((gκ + Dκ⁵) tanh(κh)), κ = μ + m.
std::pair<std::complex<double>, std::complex<double>> flat_eigenvalues(double mu, int m, double c,
                                                                       const PhysicalParams& params);

struct CollisionRecord {
    double mu = 0.0;
    int m1 = 0;
    int m2 = 0;
    int s1 = 1;  ///< +1 or −1
    int s2 = 1;
    std::complex<double> lambda;
};

struct CollisionOptions {
    int mu_points = 2001;
    int m_max = 10;
    double mu_min = -0.5;
    double mu_max = 0.5;
    double bisection_tol = 1e-10;
    double tangential_tol = 1e-10;
};

/// All crossings λ^{s1}_{μ+m1} = λ^{s2}_{μ+m2} with |m| ≤ m_max over the μ window,
/// located by a uniform scan followed by bisection.
std::vector<CollisionRecord> find_collisions(const PhysicalParams& params, double c,
                                             const CollisionOptions& options = {});

}  // namespace flexwave
