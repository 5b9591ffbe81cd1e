#include "flexwave/stability_ffh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace flexwave {

namespace {

constexpr Complex kI(0.0, 1.0);

std::size_t coefficient_grid(const TravelingWave& base, const HillTruncation& truncation) {
    if (truncation.grid_size != 0) return truncation.grid_size;
    const std::size_t n = static_cast<std::size_t>(std::max(truncation.half_width, 1));
    return std::max({next_power_of_two(8 * n), 4 * default_grid_size(base.profile.modes()),
                     std::size_t{64}});
}

// T[r][s] = ĉ_{m−n} with m = r − N, n = s − N.
ComplexMatrix toeplitz(const std::vector<Complex>& coeffs, int half_width) {
    const int size = 2 * half_width + 1;
    ComplexMatrix out(size, size);
    for (int r = 0; r < size; ++r) {
        for (int s = 0; s < size; ++s) out(r, s) = mode(coeffs, r - s);
    }
    return out;
}

std::vector<Complex> coefficients_of(const GridFunction& f) { return fourier_coefficients(f.values()); }

// Column multipliers (i(μ+n))^p.
Eigen::VectorXcd column_multiplier(double mu, int half_width, int power) {
    Eigen::VectorXcd out(2 * half_width + 1);
    for (int s = 0; s < out.size(); ++s) {
        out[s] = integer_power(kI * (mu + static_cast<double>(s - half_width)), power);
    }
    return out;
}

struct BaseState {
    std::size_t grid = 0;
    GridFunction eta;
    GridFunction ex;
    GridFunction qx;
    GridFunction f;
};

BaseState sample_base(const TravelingWave& base, std::size_t grid) {
    BaseState s;
    s.grid = grid;
    s.eta = eval_profile(base.profile, grid);
    s.ex = spectral_derivative(base.profile, 1, grid);
    s.qx = qx_from_profile(base, grid);
    s.f = GridFunction(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        s.f[i] = s.ex[i] * (s.qx[i] - base.c) / (1.0 + s.ex[i] * s.ex[i]);
    }
    return s;
}

ComplexMatrix flex_matrix(const TravelingWave& base, IceModel model, double mu, int half_width,
                          std::size_t grid) {
    const int size = 2 * half_width + 1;
    if (model == IceModel::LinearBiharmonic) {
        return column_multiplier(mu, half_width, 4).asDiagonal();
    }
    // Linearising ∂²[η_xx s^{-5/2}] + (5/2)∂[η_xx² η_x s^{-7/2}], s = 1 + η_x², gives
    // Dx²(a1 Dx² v + a2 Dx v) + Dx(−a2 Dx² v + b2 Dx v); expanding the outer
    // derivatives leaves Σ_p g_p Dx^p v with the coefficients below.
    const GridFunction ex = spectral_derivative(base.profile, 1, grid);
    const GridFunction exx = spectral_derivative(base.profile, 2, grid);
    GridFunction a1(grid), a2(grid), b2(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        const double s = 1.0 + ex[i] * ex[i];
        a1[i] = std::pow(s, -2.5);
        a2[i] = -5.0 * exx[i] * ex[i] * std::pow(s, -3.5);
        b2[i] = 2.5 * exx[i] * exx[i] * (std::pow(s, -3.5) - 7.0 * ex[i] * ex[i] * std::pow(s, -4.5));
    }
    const GridFunction a1x = differentiate(a1, 1);
    const GridFunction a1xx = differentiate(a1, 2);
    const GridFunction a2x = differentiate(a2, 1);
    const GridFunction a2xx = differentiate(a2, 2);
    const GridFunction b2x = differentiate(b2, 1);
    GridFunction g1(grid), g2(grid), g3(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        g3[i] = 2.0 * a1x[i];
        g2[i] = a1xx[i] + a2x[i] + b2[i];
        g1[i] = a2xx[i] + b2x[i];
    }
    ComplexMatrix out = ComplexMatrix::Zero(size, size);
    const GridFunction* coefficient[4] = {&g1, &g2, &g3, &a1};
    for (int p = 1; p <= 4; ++p) {
        out += toeplitz(coefficients_of(*coefficient[p - 1]), half_width) *
               column_multiplier(mu, half_width, p).asDiagonal();
    }
    return out;
}

}  // namespace

ComplexMatrix linearized_flex(const TravelingWave& base, IceModel model, double mu,
                              const HillTruncation& truncation) {
    return flex_matrix(base, model, mu, truncation.half_width, coefficient_grid(base, truncation));
}

Pencil assemble_matrices(const TravelingWave& base, double mu, const HillTruncation& truncation) {
    const int nh = truncation.half_width;
    const int size = truncation.size();
    const std::size_t grid = coefficient_grid(base, truncation);
    const BaseState s = sample_base(base, grid);
    const double c = base.c;
    const PhysicalParams& p = base.params;

    // Local (Bernoulli) rows.
    GridFunction eta_drift(grid), q_drift(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        const double u = s.qx[i] - c;
        eta_drift[i] = -s.f[i] * u + s.f[i] * s.f[i] * s.ex[i];
        q_drift[i] = u - s.f[i] * s.ex[i];
    }
    const Eigen::VectorXcd dx = column_multiplier(mu, nh, 1);
    const ComplexMatrix A = toeplitz(coefficients_of(s.f), nh);
    ComplexMatrix S = toeplitz(coefficients_of(eta_drift), nh) * dx.asDiagonal();
    S.diagonal().array() += p.g;
    S += p.D * flex_matrix(base, base.model, mu, nh, grid);
    const ComplexMatrix T = toeplitz(coefficients_of(q_drift), nh) * dx.asDiagonal();

    // Nonlocal rows: test wavenumber k = −(μ+m), divided through by cosh(kh).
    ComplexMatrix C(size, size), U(size, size), V(size, size);
    std::vector<Complex> cc(grid), uu(grid), ss(grid);
    for (int r = 0; r < size; ++r) {
        const double kappa = mu + static_cast<double>(r - nh);
        const double t = p.h.tanh_of(kappa);
        for (std::size_t i = 0; i < grid; ++i) {
            const double arg = kappa * s.eta[i];
            const double ch = std::cosh(arg);
            const double sh = std::sinh(arg);
            const double cosh_like = ch + t * sh;
            const double sinh_like = sh + t * ch;
            cc[i] = -kI * cosh_like;
            uu[i] = -kappa * (kI * s.ex[i] * c * sinh_like + s.qx[i] * cosh_like);
            ss[i] = -sinh_like;
        }
        const auto c_hat = fourier_coefficients(std::span<const Complex>(cc));
        const auto u_hat = fourier_coefficients(std::span<const Complex>(uu));
        const auto s_hat = fourier_coefficients(std::span<const Complex>(ss));
        const int m = r - nh;
        for (int col = 0; col < size; ++col) {
            const int n = col - nh;
            C(r, col) = mode(c_hat, m - n);
            U(r, col) = c * mode(c_hat, m - n) * dx[col] + mode(u_hat, m - n);
            V(r, col) = mode(s_hat, m - n) * dx[col];
        }
    }

    Pencil out;
    out.mu = mu;
    out.half_width = nh;
    out.L1 = ComplexMatrix::Zero(2 * size, 2 * size);
    out.L2 = ComplexMatrix::Zero(2 * size, 2 * size);
    out.L1.topLeftCorner(size, size) = A;
    out.L1.topRightCorner(size, size) = -ComplexMatrix::Identity(size, size);
    out.L1.bottomLeftCorner(size, size) = C;
    out.L2.topLeftCorner(size, size) = S;
    out.L2.topRightCorner(size, size) = T;
    out.L2.bottomLeftCorner(size, size) = U;
    out.L2.bottomRightCorner(size, size) = V;
    return out;
}

GeneralizedSpectrum solve_spectrum(const ComplexMatrix& L1, const ComplexMatrix& L2) {
    const lapack_int n = static_cast<lapack_int>(L1.rows());
    if (L1.cols() != n || L2.rows() != n || L2.cols() != n) {
        throw EigSolverFailure("pencil matrices must be square and of equal size");
    }
    ComplexMatrix a = L2;
    ComplexMatrix b = L1;
    std::vector<Complex> alpha(static_cast<std::size_t>(n)), beta(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, b.data(), n,
                                          alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw EigSolverFailure("zggev failed with info = " + std::to_string(info));

    const double scale = std::max(1.0, L1.cwiseAbs().maxCoeff());
    GeneralizedSpectrum out;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (std::abs(beta[i]) <= kInfiniteBetaTolerance * scale) {
            ++out.infinite_count;
            continue;
        }
        const Complex lambda = alpha[i] / beta[i];
        if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
            ++out.infinite_count;
            continue;
        }
        out.finite.push_back(lambda);
    }
    return out;
}

double FloquetSpectrum::max_growth() const {
    double best = 0.0;
    for (const auto& set : eigenvalues) {
        for (const auto& l : set) best = std::max(best, l.real());
    }
    return best;
}

std::vector<double> uniform_floquet_grid(int count) {
    if (count < 2) throw DomainError("a Floquet sweep needs at least two exponents");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = -0.5 + i / static_cast<double>(count);
    return out;
}

namespace {

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FLEXWAVE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace

FloquetSpectrum sweep_floquet(const TravelingWave& base, const std::vector<double>& mu_values,
                              const SweepOptions& options) {
    FloquetSpectrum out;
    out.mu_values = mu_values;
    out.half_width = options.truncation.half_width;
    out.speed_scale = std::abs(base.c);
    out.eigenvalues.assign(mu_values.size(), {});
    std::vector<char> failed(mu_values.size(), 0);

    auto work = [&](std::size_t i) {
        try {
            const Pencil pencil = assemble_matrices(base, mu_values[i], options.truncation);
            out.eigenvalues[i] = solve_spectrum(pencil.L1, pencil.L2).finite;
        } catch (const Error&) {
            failed[i] = 1;
        }
    };

    const int threads = std::min<int>(thread_count(options.threads), static_cast<int>(mu_values.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < mu_values.size(); ++i) work(i);
    } else {
        // Static interleaved partition; each μ writes only its own slot.
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = static_cast<std::size_t>(t); i < mu_values.size();
                     i += static_cast<std::size_t>(threads)) {
                    work(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < mu_values.size(); ++i) {
        if (failed[i]) out.failed_mu.push_back(mu_values[i]);
    }
    return out;
}

FloquetSpectrum sweep_floquet(const TravelingWave& base, int mu_count, const SweepOptions& options) {
    return sweep_floquet(base, uniform_floquet_grid(mu_count), options);
}

std::vector<double> refine_near_collisions(std::vector<double> mu_values,
                                           const std::vector<CollisionRecord>& collisions,
                                           double lambda_radius, int extra_per_collision,
                                           double width) {
    auto wrap = [](double mu) {
        double w = mu - std::floor(mu + 0.5);
        if (w >= 0.5) w -= 1.0;
        return w;
    };
    for (const auto& col : collisions) {
        if (std::abs(col.lambda) >= lambda_radius) continue;
        for (int j = -extra_per_collision; j <= extra_per_collision; ++j) {
            mu_values.push_back(wrap(col.mu + width * j / std::max(extra_per_collision, 1)));
        }
    }
    std::sort(mu_values.begin(), mu_values.end());
    mu_values.erase(std::unique(mu_values.begin(), mu_values.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    mu_values.end());
    return mu_values;
}

const char* to_string(InstabilityKind kind) {
    return kind == InstabilityKind::Modulational ? "modulational" : "high-frequency";
}

bool InstabilityReport::has(InstabilityKind kind) const {
    return std::any_of(clusters.begin(), clusters.end(),
                       [kind](const InstabilityCluster& c) { return c.kind == kind; });
}

InstabilityReport classify(const FloquetSpectrum& spectrum, const ClassifyOptions& options) {
    InstabilityReport report;

    // μ ordering, so that "adjacent in μ" means neighbouring sweep positions.
    std::vector<std::size_t> order(spectrum.mu_values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spectrum.mu_values[a] < spectrum.mu_values[b];
    });

    struct Point {
        std::size_t rank;
        double mu;
        Complex lambda;
    };
    std::vector<Point> points;
    double smallest_mu = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < order.size(); ++r) {
        const std::size_t i = order[r];
        // Refined grids can carry μ = 0 as a rounding-level value.
        const double mu = std::abs(spectrum.mu_values[i]) < 1e-12 ? 0.0 : spectrum.mu_values[i];
        if (mu != 0.0) smallest_mu = std::min(smallest_mu, std::abs(mu));
        for (const auto& l : spectrum.eigenvalues[i]) {
            if (l.real() > report.max_growth) {
                report.max_growth = l.real();
                report.argmax_mu = mu;
                report.argmax_lambda = l;
            }
            if (mu == 0.0 && std::abs(l) < options.zero_cluster_radius) continue;
            if (l.real() > options.growth_threshold + options.relative_threshold * std::abs(l)) {
                points.push_back({r, mu, l});
            }
        }
    }

    std::vector<std::size_t> parent(points.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            const std::size_t gap = points[a].rank > points[b].rank ? points[a].rank - points[b].rank
                                                                    : points[b].rank - points[a].rank;
            if (gap <= 1 && std::abs(points[a].lambda - points[b].lambda) < options.cluster_radius) {
                parent[find(a)] = find(b);
            }
        }
    }

    std::vector<std::size_t> roots;
    std::vector<InstabilityCluster> clusters;
    std::vector<bool> touches_origin;
    for (std::size_t a = 0; a < points.size(); ++a) {
        const std::size_t root = find(a);
        auto it = std::find(roots.begin(), roots.end(), root);
        std::size_t idx;
        if (it == roots.end()) {
            roots.push_back(root);
            InstabilityCluster c;
            c.mu_min = c.mu_max = points[a].mu;
            clusters.push_back(c);
            touches_origin.push_back(false);
            idx = clusters.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - roots.begin());
        }
        InstabilityCluster& c = clusters[idx];
        c.mu_min = std::min(c.mu_min, points[a].mu);
        c.mu_max = std::max(c.mu_max, points[a].mu);
        c.centroid += points[a].lambda;
        c.max_growth = std::max(c.max_growth, points[a].lambda.real());
        ++c.size;
        // The eigenvalues of a sideband instability shrink to zero with μ; at the
        // exponents nearest zero they sit within a speed-bounded distance μ(1+|c|).
        const double mu_abs = std::abs(points[a].mu);
        const bool nearest = mu_abs == 0.0 || mu_abs <= smallest_mu * (1.0 + 1e-9);
        const double reach = 3.0 * options.growth_threshold + 2.0 * mu_abs * (1.0 + spectrum.speed_scale);
        if (nearest && std::abs(points[a].lambda) <= reach) touches_origin[idx] = true;
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        clusters[i].centroid /= static_cast<double>(clusters[i].size);
        clusters[i].kind = touches_origin[i] ? InstabilityKind::Modulational : InstabilityKind::HighFrequency;
    }
    std::sort(clusters.begin(), clusters.end(), [](const InstabilityCluster& a, const InstabilityCluster& b) {
        return a.mu_min < b.mu_min || (a.mu_min == b.mu_min && a.centroid.imag() < b.centroid.imag());
    });
    report.clusters = std::move(clusters);
    return report;
}

std::vector<OverlayPoint> nls_overlay(const NlsCoefficients& coeffs, double a, double c,
                                      const std::vector<double>& mu_values, OverlaySign sign) {
    std::vector<OverlayPoint> out;
    if (!coeffs.focusing()) return out;
    const double factor = sign == OverlaySign::GroupMinusSpeed ? 1.0 : -1.0;
    for (double mu : mu_values) {
        const GrowthRate rate = growth_rate(mu, a, coeffs);
        if (rate.stable) continue;
        out.push_back({mu, rate.omega, factor * mu * (coeffs.omega_p - c)});
    }
    return out;
}

}  // namespace flexwave
