#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flexwave/errors.hpp"
#include "flexwave/spectral.hpp"

namespace flexwave {

/// Fluid depth: a finite positive value or the distinguished infinite depth.
class Depth {
public:
    static Depth infinite() { return Depth(); }
    static Depth finite(double h);

    bool is_infinite() const { return infinite_; }
    /// Finite depth value; throws DomainError for infinite depth.
    double value() const;
    /// tanh(k h), with tanh(k·∞) = sign(k).
    double tanh_of(double k) const;

    std::string to_string() const;
    static Depth parse(const std::string& text);

    bool operator==(const Depth&) const = default;

private:
    Depth() = default;
    bool infinite_ = true;
    double h_ = 0.0;
};

/// Dimensionless parameters. D is the flexural rigidity already divided by density.
struct PhysicalParams {
    double g = 1.0;
    Depth h = Depth::infinite();
    double D = 0.0;

    void validate() const;
};

enum class IceModel { LinearBiharmonic, NonlinearCosserat };

std::string to_string(IceModel model);
IceModel parse_ice_model(const std::string& text);

/// Cosine-series profile η(x) = Σ_{j=1..N} a_j cos(jx). No mean mode.
class SpectralProfile {
public:
    SpectralProfile() = default;
    explicit SpectralProfile(std::vector<double> coeffs);

    std::size_t modes() const { return coeffs_.size(); }
    /// a_j for 1 ≤ j ≤ N; zero outside that range.
    double coefficient(std::size_t j) const;
    std::span<const double> coeffs() const { return coeffs_; }

    double max_abs_coefficient() const;

private:
    std::vector<double> coeffs_;
};

struct TravelingWave {
    SpectralProfile profile;
    double c = 0.0;
    PhysicalParams params;
    IceModel model = IceModel::LinearBiharmonic;
};

/// max(next power of two ≥ oversample·N, 64).
std::size_t default_grid_size(std::size_t modes, std::size_t oversample = 4);

GridFunction eval_profile(const SpectralProfile& profile, std::size_t grid_size);

/// Samples of dⁿη/dxⁿ, n ≤ 5.
GridFunction spectral_derivative(const SpectralProfile& profile, int order, std::size_t grid_size);

/// Recovers cosine amplitudes a_1..a_modes from grid samples of an even profile.
SpectralProfile cosine_projection(const GridFunction& eta, std::size_t modes);

/// Surface pressure of the ice sheet for a sampled periodic profile. The Cosserat
/// operator is evaluated pseudospectrally: derivatives in Fourier space, the
/// rational algebra pointwise.
GridFunction p_flex(const GridFunction& eta, IceModel model);
GridFunction p_flex(const SpectralProfile& profile, IceModel model, std::size_t grid_size);

/// Tangential surface velocity q_x = c − sqrt((1+η_x²)(c² − 2gη − 2D P_flex)).
/// Throws NonpositiveRadicand when the radicand is not strictly positive.
GridFunction qx_from_profile(const TravelingWave& wave, std::size_t grid_size);

}  // namespace flexwave
