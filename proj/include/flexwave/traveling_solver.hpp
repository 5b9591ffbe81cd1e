#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flexwave/physics_core.hpp"

namespace flexwave {

struct SolverConfig {
    double residual_tol = 1e-10;    ///< infinity norm of the steady residual
    int max_newton_iters = 50;
    double jacobian_step = 1e-7;    ///< forward-difference step
    double tail_threshold = 1e-12;  ///< |a_N| / max|a_j| counted as resolved
    double amplitude_step = 1e-3;   ///< initial Δa₁ for continuation
    double min_amplitude_step = 1e-9;
    std::size_t grid_oversample = 4;
    std::size_t initial_modes = 16;
    std::size_t max_modes = 512;

    void validate() const;
};

/// Steady residual F_m, m = 1..N, for the unknowns z = [c, a₂, …, a_N] at fixed a₁.
/// Each component is the cos(mx) projection of
/// sqrt((1+η_x²)(c² − 2gη − 2D P_flex)) (sinh(mη) + cosh(mη) tanh(mh)),
/// integrated over one period with the trapezoid rule.
Eigen::VectorXd residual(std::span<const double> z, double a1, const PhysicalParams& params,
                         IceModel model, const SolverConfig& config, std::size_t grid_size = 0);

/// Same residual evaluated for a complete wave (a₁ taken from the profile).
Eigen::VectorXd wave_residual(const TravelingWave& wave, const SolverConfig& config,
                              std::size_t grid_size = 0);

/// sin(mx) projections of the same integrand; they vanish for even profiles.
Eigen::VectorXd odd_residual(const TravelingWave& wave, const SolverConfig& config,
                             std::size_t grid_size = 0);

/// Unknown vector z = [c, a₂..a_N] of a wave.
std::vector<double> unknowns_of(const TravelingWave& wave);

/// Wave assembled from the unknown vector and a₁.
TravelingWave wave_from_unknowns(std::span<const double> z, double a1, const PhysicalParams& params,
                                 IceModel model);

struct NewtonReport {
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Newton iteration with a forward-difference Jacobian.
TravelingWave newton_solve(std::span<const double> z0, double a1, const PhysicalParams& params,
                           IceModel model, const SolverConfig& config, NewtonReport* report = nullptr);

struct BranchPoint {
    TravelingWave wave;
    double residual_norm = 0.0;
    int newton_iterations = 0;
    bool tail_resolved = true;
};

enum class BranchDirection { Left, Right };

const char* to_string(BranchDirection direction);

struct BifurcationBranch {
    PhysicalParams params;
    IceModel model = IceModel::LinearBiharmonic;
    std::vector<BranchPoint> points;  ///< strictly increasing a₁
};

/// Trailing-mode test: the larger of |a_N|, |a_{N−1}| relative to max|a_j|.
double tail_ratio(const SpectralProfile& profile);

/// Solves at fixed a₁ and doubles the mode count until the tail test passes.
BranchPoint solve_resolved(std::span<const double> z0, double a1, const PhysicalParams& params,
                           IceModel model, const SolverConfig& config);

/// Continues the k=1 branch from the bifurcation point up to a₁ = a1_max.
BifurcationBranch continue_branch(const PhysicalParams& params, IceModel model, double a1_max,
                                  const SolverConfig& config);

/// Extends an existing branch from its last point up to a1_max.
BifurcationBranch continue_branch(BifurcationBranch branch, double a1_max, const SolverConfig& config);

/// Sign of the least-squares slope of c against a₁² over the `samples` smallest points.
BranchDirection branch_direction(const BifurcationBranch& branch, std::size_t samples = 5);

/// The slope itself, dc/d(a₁²).
double branch_curvature(const BifurcationBranch& branch, std::size_t samples = 5);

}  // namespace flexwave
