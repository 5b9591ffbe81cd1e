#include "flexwave/linear_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flexwave {

namespace {

void require_deep_water(const PhysicalParams& params) {
    if (!params.h.is_infinite()) {
        throw FiniteDepthUnsupported("envelope coefficients are only available for infinite depth");
    }
}

void check_wilton(double g, double k4D, double tolerance) {
    if (std::abs(g - 14.0 * k4D) < tolerance * g) {
        throw WiltonPole("g - 14 k^4 D = " + std::to_string(g - 14.0 * k4D) +
                         " vanishes: second harmonic is resonant");
    }
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double dispersion(double k, const PhysicalParams& params) {
    if (k == 0.0) throw DomainError("dispersion relation is undefined at k = 0");
    const double k5 = k * k * k * k * k;
    const double w2 = (params.g * k + params.D * k5) * params.h.tanh_of(k);
    return std::sqrt(std::max(w2, 0.0));
}

DispersionJet dispersion_jet(double k, const PhysicalParams& params) {
    if (!(k > 0.0)) throw DomainError("dispersion derivatives need k > 0");
    const double g = params.g;
    const double D = params.D;
    const double k4 = k * k * k * k;
    // ω² = P(k) T(k), P = gk + Dk⁵, T = tanh(kh)
    const double P = g * k + D * k4 * k;
    const double P1 = g + 5.0 * D * k4;
    const double P2 = 20.0 * D * k * k * k;
    double T = 1.0, T1 = 0.0, T2 = 0.0;
    if (!params.h.is_infinite()) {
        const double h = params.h.value();
        T = std::tanh(k * h);
        const double sech2 = 1.0 - T * T;
        T1 = h * sech2;
        T2 = -2.0 * h * h * sech2 * T;
    }
    const double F = P * T;
    const double F1 = P1 * T + P * T1;
    const double F2 = P2 * T + 2.0 * P1 * T1 + P * T2;
    DispersionJet out;
    out.omega = std::sqrt(F);
    out.omega_p = F1 / (2.0 * out.omega);
    out.omega_pp = (F2 - 2.0 * out.omega_p * out.omega_p) / (2.0 * out.omega);
    return out;
}

double bifurcation_speed(const PhysicalParams& params) {
    return std::sqrt(params.h.tanh_of(1.0) * (params.g + params.D));
}

NlsCoefficients nls_coefficients(IceModel model, int k, const PhysicalParams& params,
                                 double pole_tolerance) {
    require_deep_water(params);
    if (k == 0) throw DomainError("carrier wavenumber must be nonzero");
    const double g = params.g;
    const double kk = static_cast<double>(k);
    const double k2 = kk * kk;
    const double x = k2 * k2 * params.D;  // k⁴D
    check_wilton(g, x, pole_tolerance);

    NlsCoefficients out;
    out.k = k;
    out.omega = std::sqrt(std::abs(kk) * (g + x));
    out.omega_p = sgn(kk) * (g + 5.0 * x) / (2.0 * out.omega);
    out.omega_pp = -out.omega * (g * g - 30.0 * g * x - 15.0 * x * x) / (4.0 * k2 * (g + x) * (g + x));
    const double denominator = (g + x) * (g - 14.0 * x);
    if (model == IceModel::NonlinearCosserat) {
        out.M = -out.omega * k2 * (4.0 * g * g - 27.0 * g * x + 44.0 * x * x) / (2.0 * denominator);
    } else {
        out.M = -out.omega * k2 * (2.0 * g * g - 11.0 * g * x - 13.0 * x * x) / denominator;
    }
    return out;
}

double omega_pp_sign_change_rigidity(double g, int k) {
    // 15x² + 30gx − g² = 0
    const double x = g * (-30.0 + std::sqrt(900.0 + 60.0)) / 30.0;
    const double k4 = std::pow(static_cast<double>(k), 4);
    return x / k4;
}

Modulation classify_modulational(IceModel model, int k, const PhysicalParams& params) {
    return nls_coefficients(model, k, params).focusing() ? Modulation::Focusing
                                                         : Modulation::Defocusing;
}

GrowthRate growth_rate(double mu, double a, const NlsCoefficients& coeffs) {
    const double forcing = coeffs.omega_pp * coeffs.M * a * a * mu * mu;
    const double half_curvature = 0.5 * coeffs.omega_pp;
    const double dispersive = half_curvature * half_curvature * mu * mu * mu * mu;
    double omega2 = forcing - dispersive;
    // Cancellation at the band edge leaves rounding noise.
    const double scale = std::abs(forcing) + dispersive;
    if (std::abs(omega2) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) omega2 = 0.0;
    if (omega2 < 0.0) return {0.0, true};
    return {std::sqrt(omega2), false};
}

double most_unstable_sideband(double a, const NlsCoefficients& coeffs) {
    if (!coeffs.focusing()) return 0.0;
    return std::abs(a) * std::sqrt(2.0 * coeffs.M / coeffs.omega_pp);
}

double c_nls(double a, const NlsCoefficients& coeffs, const PhysicalParams& params) {
    if (coeffs.k != 1) throw DomainError("branch speed prediction needs a k = 1 carrier");
    (void)params;
    return coeffs.omega - coeffs.M * a * a;
}

std::complex<double> second_harmonic(std::complex<double> eta1, int k, const PhysicalParams& params,
                                     double pole_tolerance) {
    const double kk = static_cast<double>(k);
    const double x = kk * kk * kk * kk * params.D;
    check_wilton(params.g, x, pole_tolerance);
    return (params.g + x) / (params.g - 14.0 * x) * std::abs(kk) * eta1 * eta1;
}

double resonance_residual(int K, const PhysicalParams& params) {
    const double kk = static_cast<double>(K);
    const double k4 = kk * kk * kk * kk;
    return (params.g + params.D) * kk * params.h.tanh_of(1.0) -
           (params.g + k4 * params.D) * params.h.tanh_of(kk);
}

double resonant_rigidity(int K, const PhysicalParams& params) {
    if (K < 2) throw DomainError("resonant mode K must be at least 2");
    const double kk = static_cast<double>(K);
    const double k4 = kk * kk * kk * kk;
    const double t1 = params.h.tanh_of(1.0);
    const double tK = params.h.tanh_of(kk);
    const double denominator = k4 * tK - kk * t1;
    if (denominator == 0.0) throw NoPositiveRoot("resonance condition is degenerate");
    const double D = params.g * (kk * t1 - tK) / denominator;
    if (!(D > 0.0)) {
        throw NoPositiveRoot("mode " + std::to_string(K) + " has no positive resonant rigidity");
    }
    return D;
}

std::pair<std::complex<double>, std::complex<double>> flat_eigenvalues(double mu, int m, double c,
                                                                       const PhysicalParams& params) {
    const double kappa = mu + static_cast<double>(m);
    const double k5 = kappa * kappa * kappa * kappa * kappa;
    const double radicand = (params.g * kappa + params.D * k5) * params.h.tanh_of(kappa);
    const double root = std::sqrt(std::max(radicand, 0.0));
    return {{0.0, c * kappa + root}, {0.0, c * kappa - root}};
}

std::vector<CollisionRecord> find_collisions(const PhysicalParams& params, double c,
                                             const CollisionOptions& options) {
    struct Branch {
        int m;
        int s;
    };
    std::vector<Branch> branches;
    for (int m = -options.m_max; m <= options.m_max; ++m) {
        branches.push_back({m, 1});
        branches.push_back({m, -1});
    }
    auto value = [&](const Branch& b, double mu) {
        const auto [plus, minus] = flat_eigenvalues(mu, b.m, c, params);
        return b.s > 0 ? plus.imag() : minus.imag();
    };

    const int n = std::max(options.mu_points, 2);
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] =
            options.mu_min + (options.mu_max - options.mu_min) * i / static_cast<double>(n - 1);
    }
    // Values of every branch on the grid.
    std::vector<std::vector<double>> table(branches.size(), std::vector<double>(grid.size()));
    for (std::size_t b = 0; b < branches.size(); ++b) {
        for (std::size_t i = 0; i < grid.size(); ++i) table[b][i] = value(branches[b], grid[i]);
    }

    std::vector<CollisionRecord> out;
    auto record = [&](std::size_t b1, std::size_t b2, double mu) {
        CollisionRecord r;
        r.mu = mu;
        r.m1 = branches[b1].m;
        r.s1 = branches[b1].s;
        r.m2 = branches[b2].m;
        r.s2 = branches[b2].s;
        r.lambda = {0.0, value(branches[b1], mu)};
        out.push_back(r);
    };

    for (std::size_t b1 = 0; b1 < branches.size(); ++b1) {
        for (std::size_t b2 = b1 + 1; b2 < branches.size(); ++b2) {
            auto gap = [&](std::size_t i) { return table[b1][i] - table[b2][i]; };
            auto gap_at = [&](double mu) { return value(branches[b1], mu) - value(branches[b2], mu); };
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gi = gap(i);
                if (gi == 0.0) {
                    record(b1, b2, grid[i]);
                    continue;
                }
                if (i + 1 < grid.size()) {
                    const double gn = gap(i + 1);
                    if (gn != 0.0 && std::signbit(gi) != std::signbit(gn)) {
                        double lo = grid[i], hi = grid[i + 1], glo = gi;
                        while (hi - lo > options.bisection_tol) {
                            const double mid = 0.5 * (lo + hi);
                            const double gm = gap_at(mid);
                            if (gm == 0.0) {
                                lo = hi = mid;
                                break;
                            }
                            if (std::signbit(gm) == std::signbit(glo)) {
                                lo = mid;
                                glo = gm;
                            } else {
                                hi = mid;
                            }
                        }
                        record(b1, b2, 0.5 * (lo + hi));
                        continue;
                    }
                }
                // Tangential contact: local minimum of |gap| without a sign change.
                const bool left_ok = i == 0 || std::abs(gap(i - 1)) >= std::abs(gi);
                const bool right_ok = i + 1 == grid.size() || std::abs(gap(i + 1)) >= std::abs(gi);
                const bool no_change_left = i == 0 || std::signbit(gap(i - 1)) == std::signbit(gi);
                if (left_ok && right_ok && no_change_left && std::abs(gi) < options.tangential_tol) {
                    record(b1, b2, grid[i]);
                }
            }
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CollisionRecord& a, const CollisionRecord& b) { return a.mu < b.mu; });
    return out;
}

}  // namespace flexwave
