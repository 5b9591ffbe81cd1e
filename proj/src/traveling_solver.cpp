#include "flexwave/traveling_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "flexwave/linear_theory.hpp"

namespace flexwave {

void SolverConfig::validate() const {
    if (!(residual_tol > 0.0) || !(jacobian_step > 0.0) || !(tail_threshold > 0.0) ||
        !(amplitude_step > 0.0) || !(min_amplitude_step > 0.0)) {
        throw ConfigError("solver tolerances and steps must be positive");
    }
    if (max_newton_iters < 1) throw ConfigError("max_newton_iters must be at least 1");
    if (grid_oversample < 4) throw ConfigError("grid_oversample must be at least 4");
    if (initial_modes < 2 || max_modes < initial_modes) {
        throw ConfigError("mode limits must satisfy 2 <= initial_modes <= max_modes");
    }
}

namespace {

struct Projections {
    Eigen::VectorXd even;
    Eigen::VectorXd odd;
};

// cos(mx) and sin(mx) projections of the steady integrand, m = 1..N.
Projections project_integrand(const SpectralProfile& profile, double c, const PhysicalParams& params,
                              IceModel model, std::size_t grid_size, bool want_odd) {
    const std::size_t n = profile.modes();
    const GridFunction eta = eval_profile(profile, grid_size);
    const GridFunction ex = spectral_derivative(profile, 1, grid_size);
    const GridFunction pf = p_flex(profile, model, grid_size);

    std::vector<double> root(grid_size), growth(grid_size), kernel_up(grid_size, 1.0),
        kernel_down(grid_size, 1.0);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double radicand = c * c - 2.0 * params.g * eta[i] - 2.0 * params.D * pf[i];
        if (!(radicand > 0.0)) {
            throw NonpositiveRadicand("steady radicand " + std::to_string(radicand) +
                                      " at x = " + std::to_string(eta.x(i)));
        }
        root[i] = std::sqrt((1.0 + ex[i] * ex[i]) * radicand);
        growth[i] = std::exp(eta[i]);
    }

    std::vector<double> cos_table(grid_size), sin_table(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid_size);
        cos_table[i] = std::cos(theta);
        sin_table[i] = std::sin(theta);
    }

    Projections out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)),
                    Eigen::VectorXd::Zero(want_odd ? static_cast<Eigen::Index>(n) : 0)};
    const double weight = 2.0 * std::numbers::pi / static_cast<double>(grid_size);
    for (std::size_t m = 1; m <= n; ++m) {
        const double md = static_cast<double>(m);
        const double t = params.h.tanh_of(md);
        double even = 0.0, odd = 0.0;
        for (std::size_t i = 0; i < grid_size; ++i) {
            // e^{mη} built by recurrence; sinh(mη) + cosh(mη) tanh(mh) = ((1+t)e^{mη} − (1−t)e^{−mη})/2.
            kernel_up[i] *= growth[i];
            kernel_down[i] /= growth[i];
            const double kernel = 0.5 * ((1.0 + t) * kernel_up[i] - (1.0 - t) * kernel_down[i]);
            const std::size_t phase = (m * i) % grid_size;
            const double value = root[i] * kernel;
            even += value * cos_table[phase];
            if (want_odd) odd += value * sin_table[phase];
        }
        out.even[static_cast<Eigen::Index>(m - 1)] = weight * even;
        if (want_odd) out.odd[static_cast<Eigen::Index>(m - 1)] = weight * odd;
    }
    return out;
}

std::size_t grid_for(std::size_t modes, const SolverConfig& config, std::size_t grid_size) {
    return grid_size != 0 ? grid_size : default_grid_size(modes, config.grid_oversample);
}

SpectralProfile profile_from(std::span<const double> z, double a1) {
    std::vector<double> a(z.size());
    a[0] = a1;
    for (std::size_t j = 1; j < z.size(); ++j) a[j] = z[j];
    return SpectralProfile(std::move(a));
}

}  // namespace

Eigen::VectorXd residual(std::span<const double> z, double a1, const PhysicalParams& params,
                         IceModel model, const SolverConfig& config, std::size_t grid_size) {
    if (z.empty()) throw DomainError("unknown vector is empty");
    const SpectralProfile profile = profile_from(z, a1);
    return project_integrand(profile, z[0], params, model, grid_for(z.size(), config, grid_size), false)
        .even;
}

Eigen::VectorXd wave_residual(const TravelingWave& wave, const SolverConfig& config,
                              std::size_t grid_size) {
    return project_integrand(wave.profile, wave.c, wave.params, wave.model,
                             grid_for(wave.profile.modes(), config, grid_size), false)
        .even;
}

Eigen::VectorXd odd_residual(const TravelingWave& wave, const SolverConfig& config,
                             std::size_t grid_size) {
    return project_integrand(wave.profile, wave.c, wave.params, wave.model,
                             grid_for(wave.profile.modes(), config, grid_size), true)
        .odd;
}

std::vector<double> unknowns_of(const TravelingWave& wave) {
    std::vector<double> z(wave.profile.coeffs().begin(), wave.profile.coeffs().end());
    z[0] = wave.c;
    return z;
}

TravelingWave wave_from_unknowns(std::span<const double> z, double a1, const PhysicalParams& params,
                                 IceModel model) {
    return TravelingWave{profile_from(z, a1), z[0], params, model};
}

TravelingWave newton_solve(std::span<const double> z0, double a1, const PhysicalParams& params,
                           IceModel model, const SolverConfig& config, NewtonReport* report) {
    params.validate();
    const std::size_t n = z0.size();
    if (n < 2) throw DomainError("Newton solve needs at least two modes");
    const std::size_t grid = grid_for(n, config, 0);
    std::vector<double> z(z0.begin(), z0.end());
    auto eval = [&](std::span<const double> v) { return residual(v, a1, params, model, config, grid); };

    auto newton_step = [&](const Eigen::VectorXd& f) {
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::vector<double> shifted = z;
        for (std::size_t j = 0; j < n; ++j) {
            const double h = config.jacobian_step * std::max(1.0, std::abs(z[j]));
            shifted[j] = z[j] + h;
            jac.col(static_cast<Eigen::Index>(j)) = (eval(shifted) - f) / h;
            shifted[j] = z[j];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        if (!(lu.rcond() > 1e-15)) {
            throw SingularJacobian("Jacobian reciprocal condition " + std::to_string(lu.rcond()));
        }
        Eigen::VectorXd delta = lu.solve(f);
        if (!delta.allFinite()) throw SingularJacobian("Newton update is not finite");
        return delta;
    };

    Eigen::VectorXd f = eval(z);
    double norm = f.lpNorm<Eigen::Infinity>();
    int iterations = 0;
    while (norm > config.residual_tol) {
        if (iterations >= config.max_newton_iters) {
            throw NoConvergence("Newton stalled at residual " + std::to_string(norm) + " after " +
                                std::to_string(iterations) + " iterations");
        }
        const Eigen::VectorXd delta = newton_step(f);
        for (std::size_t j = 0; j < n; ++j) z[j] -= delta[static_cast<Eigen::Index>(j)];
        ++iterations;
        f = eval(z);
        norm = f.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(norm)) throw NoConvergence("Newton iterate diverged");
    }

    // One polishing step sharpens the small trailing amplitudes the tail test reads.
    if (norm > 0.0) {
        const Eigen::VectorXd delta = newton_step(f);
        std::vector<double> trial = z;
        for (std::size_t j = 0; j < n; ++j) trial[j] -= delta[static_cast<Eigen::Index>(j)];
        try {
            const Eigen::VectorXd f_trial = eval(trial);
            const double trial_norm = f_trial.lpNorm<Eigen::Infinity>();
            if (trial_norm <= norm) {
                z = std::move(trial);
                norm = trial_norm;
            }
            ++iterations;
        } catch (const NonpositiveRadicand&) {
        }
    }

    if (report) {
        report->iterations = iterations;
        report->residual_norm = norm;
    }
    return wave_from_unknowns(z, a1, params, model);
}

const char* to_string(BranchDirection direction) {
    return direction == BranchDirection::Right ? "right" : "left";
}

double tail_ratio(const SpectralProfile& profile) {
    const std::size_t n = profile.modes();
    const double peak = profile.max_abs_coefficient();
    if (peak == 0.0) return 0.0;
    double tail = std::abs(profile.coefficient(n));
    if (n >= 2) tail = std::max(tail, std::abs(profile.coefficient(n - 1)));
    return tail / peak;
}

BranchPoint solve_resolved(std::span<const double> z0, double a1, const PhysicalParams& params,
                           IceModel model, const SolverConfig& config) {
    std::vector<double> z(z0.begin(), z0.end());
    while (true) {
        NewtonReport report;
        TravelingWave wave = newton_solve(z, a1, params, model, config, &report);
        const bool resolved = tail_ratio(wave.profile) <= config.tail_threshold;
        const std::size_t n = wave.profile.modes();
        if (resolved || 2 * n > config.max_modes) {
            return BranchPoint{std::move(wave), report.residual_norm, report.iterations, resolved};
        }
        z = unknowns_of(wave);
        z.resize(2 * n, 0.0);
    }
}

namespace {

void extend(BifurcationBranch& branch, double a1_max, const SolverConfig& config) {
    double step = config.amplitude_step;
    while (true) {
        const bool started = !branch.points.empty();
        const double last_a1 = started ? branch.points.back().wave.profile.coefficient(1) : 0.0;
        if (last_a1 >= a1_max) return;
        // At most doubling a1 per step: a longer jump from a small wave can land on a
        // neighbouring solution family near resonances.
        const double reach = started ? std::min(step, last_a1) : step;
        const double target = std::min(last_a1 + reach, a1_max);
        std::vector<double> guess;
        if (started) {
            guess = unknowns_of(branch.points.back().wave);
        } else {
            guess.assign(config.initial_modes, 0.0);
            guess[0] = bifurcation_speed(branch.params);
        }
        if (branch.points.size() >= 2) {
            // Secant predictor along a1.
            const TravelingWave& prev = branch.points[branch.points.size() - 2].wave;
            const double prev_a1 = prev.profile.coefficient(1);
            std::vector<double> older = unknowns_of(prev);
            older.resize(guess.size(), 0.0);
            const double t = (target - last_a1) / (last_a1 - prev_a1);
            for (std::size_t j = 0; j < guess.size(); ++j) guess[j] += t * (guess[j] - older[j]);
        }
        try {
            branch.points.push_back(solve_resolved(guess, target, branch.params, branch.model, config));
            step = std::min(2.0 * step, config.amplitude_step);
        } catch (const NoConvergence&) {
            step *= 0.5;
        } catch (const SingularJacobian&) {
            step *= 0.5;
        } catch (const NonpositiveRadicand&) {
            step *= 0.5;
        }
        if (step < config.min_amplitude_step) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "continuation step fell below %g at a1 = %.10g",
                          config.min_amplitude_step, last_a1);
            throw StepUnderflow(msg);
        }
    }
}

}  // namespace

BifurcationBranch continue_branch(const PhysicalParams& params, IceModel model, double a1_max,
                                  const SolverConfig& config) {
    params.validate();
    config.validate();
    if (!(a1_max > 0.0)) throw DomainError("a1_max must be positive");
    BifurcationBranch branch{params, model, {}};
    extend(branch, a1_max, config);
    return branch;
}

BifurcationBranch continue_branch(BifurcationBranch branch, double a1_max, const SolverConfig& config) {
    branch.params.validate();
    config.validate();
    extend(branch, a1_max, config);
    return branch;
}

double branch_curvature(const BifurcationBranch& branch, std::size_t samples) {
    if (branch.points.size() < 3 || samples < 3) {
        throw InsufficientPoints("branch direction needs at least three points");
    }
    const std::size_t n = std::min(samples, branch.points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = branch.points[i].wave.profile.coefficient(1);
        const double x = a * a;
        const double y = branch.points[i].wave.c;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

BranchDirection branch_direction(const BifurcationBranch& branch, std::size_t samples) {
    return branch_curvature(branch, samples) > 0.0 ? BranchDirection::Right : BranchDirection::Left;
}

}  // namespace flexwave
