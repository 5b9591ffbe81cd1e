#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flexwave/linear_theory.hpp"
#include "flexwave/physics_core.hpp"

namespace flexwave {

using ComplexMatrix = Eigen::MatrixXcd;

/// Hill truncation: perturbation modes e^{i(μ+m)x}, m = −N..N.
struct HillTruncation {
    int half_width = 16;
    /// Grid used to sample the base-state coefficient functions; 0 picks
    /// max(next power of two ≥ 8N, 4× the profile grid, 64).
    std::size_t grid_size = 0;

    int size() const { return 2 * half_width + 1; }
};

/// Matrix of the linearised ice pressure G(η⁰; ·) on the Floquet modes. Row m,
/// column n holds the (m−n)-th Fourier coefficient of each variable coefficient
/// times the power of i(μ+n) it multiplies.
ComplexMatrix linearized_flex(const TravelingWave& base, IceModel model, double mu,
                              const HillTruncation& truncation);

/// Generalised eigenproblem λ L1 U = L2 U for U = [η̂_{−N..N}, q̂_{−N..N}].
struct Pencil {
    ComplexMatrix L1;
    ComplexMatrix L2;
    double mu = 0.0;
    int half_width = 0;
};

Pencil assemble_matrices(const TravelingWave& base, double mu, const HillTruncation& truncation);

struct GeneralizedSpectrum {
    std::vector<std::complex<double>> finite;
    int infinite_count = 0;
};

/// Threshold on |β| (relative to the scale of L1) below which λ = α/β is reported infinite.
inline constexpr double kInfiniteBetaTolerance = 1e-12;

/// All generalised eigenvalues via the complex QZ algorithm.
GeneralizedSpectrum solve_spectrum(const ComplexMatrix& L1, const ComplexMatrix& L2);

struct FloquetSpectrum {
    std::vector<double> mu_values;
    std::vector<std::vector<std::complex<double>>> eigenvalues;  ///< one set per μ
    std::vector<double> failed_mu;
    int half_width = 0;
    double speed_scale = 0.0;  ///< |c| of the base wave

    double max_growth() const;
};

/// μ_i = −1/2 + i/count, i = 0..count−1.
std::vector<double> uniform_floquet_grid(int count);

struct SweepOptions {
    HillTruncation truncation;
    /// Worker threads; 0 reads FLEXWAVE_THREADS and falls back to 1.
    int threads = 0;
};

FloquetSpectrum sweep_floquet(const TravelingWave& base, const std::vector<double>& mu_values,
                              const SweepOptions& options);
FloquetSpectrum sweep_floquet(const TravelingWave& base, int mu_count, const SweepOptions& options);

/// Adds μ points around zero-amplitude collisions near the origin of the spectral plane.
std::vector<double> refine_near_collisions(std::vector<double> mu_values,
                                           const std::vector<CollisionRecord>& collisions,
                                           double lambda_radius = 0.5, int extra_per_collision = 8,
                                           double width = 0.01);

enum class InstabilityKind { Modulational, HighFrequency };

const char* to_string(InstabilityKind kind);

struct InstabilityCluster {
    InstabilityKind kind = InstabilityKind::HighFrequency;
    double mu_min = 0.0;
    double mu_max = 0.0;
    std::complex<double> centroid;
    double max_growth = 0.0;
    std::size_t size = 0;
};

struct ClassifyOptions {
    /// An eigenvalue counts as unstable when Re λ > growth_threshold + relative_threshold·|λ|.
    /// Large stiff-sheet eigenvalues (|λ| ~ 1e4 at N = 32) carry rounding of order 1e-9·|λ|.
    double growth_threshold = 1e-8;
    double relative_threshold = 1e-8;
    /// At μ = 0 the symmetry eigenvalues sit in a defective cluster at λ = 0 that QZ
    /// resolves only to about sqrt(eps); eigenvalues there with |λ| below this are ignored.
    double zero_cluster_radius = 1e-5;
    double cluster_radius = 0.05;
};

struct InstabilityReport {
    double max_growth = 0.0;
    double argmax_mu = 0.0;
    std::complex<double> argmax_lambda;
    std::vector<InstabilityCluster> clusters;

    bool has(InstabilityKind kind) const;
};

InstabilityReport classify(const FloquetSpectrum& spectrum, const ClassifyOptions& options = {});

/// Vertical coordinate of the envelope prediction: μ(v_g − c) or μ(c − v_g).
enum class OverlaySign { GroupMinusSpeed, SpeedMinusGroup };

struct OverlayPoint {
    double mu = 0.0;
    double re = 0.0;
    double im = 0.0;
};

/// Parametric curve (Ω(μ), ±μ(v_g − c)) over the unstable band of the envelope
/// equation. Empty when defocusing. `a` is the envelope amplitude.
std::vector<OverlayPoint> nls_overlay(const NlsCoefficients& coeffs, double a, double c,
                                      const std::vector<double>& mu_values,
                                      OverlaySign sign = OverlaySign::GroupMinusSpeed);

}  // namespace flexwave
