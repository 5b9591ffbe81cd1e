#include "flexwave/physics_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace flexwave {

Depth Depth::finite(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("depth must be positive and finite, got " + std::to_string(h));
    }
    Depth d;
    d.infinite_ = false;
    d.h_ = h;
    return d;
}

double Depth::value() const {
    if (infinite_) throw DomainError("infinite depth has no finite value");
    return h_;
}

double Depth::tanh_of(double k) const {
    if (infinite_) return k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : 0.0);
    return std::tanh(k * h_);
}

std::string Depth::to_string() const {
    if (infinite_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << h_;
    return os.str();
}

Depth Depth::parse(const std::string& text) {
    if (text == "inf" || text == "infinite" || text == "Infinity" || text == "infinity") {
        return infinite();
    }
    std::size_t used = 0;
    double h = 0.0;
    try {
        h = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse depth '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("cannot parse depth '" + text + "'");
    if (std::isinf(h) && h > 0) return infinite();
    return finite(h);
}

void PhysicalParams::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("g must be positive");
    if (!(D >= 0.0) || !std::isfinite(D)) throw DomainError("D must be nonnegative");
}

std::string to_string(IceModel model) {
    return model == IceModel::LinearBiharmonic ? "linear" : "nonlinear";
}

IceModel parse_ice_model(const std::string& text) {
    if (text == "linear" || text == "biharmonic") return IceModel::LinearBiharmonic;
    if (text == "nonlinear" || text == "toland" || text == "cosserat") {
        return IceModel::NonlinearCosserat;
    }
    throw ConfigError("unknown ice model '" + text + "'");
}

SpectralProfile::SpectralProfile(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("a profile needs at least one mode");
}

double SpectralProfile::coefficient(std::size_t j) const {
    if (j == 0 || j > coeffs_.size()) return 0.0;
    return coeffs_[j - 1];
}

double SpectralProfile::max_abs_coefficient() const {
    double m = 0.0;
    for (double a : coeffs_) m = std::max(m, std::abs(a));
    return m;
}

std::size_t default_grid_size(std::size_t modes, std::size_t oversample) {
    return std::max<std::size_t>(next_power_of_two(oversample * modes), 64);
}

namespace {

void require_grid(std::size_t modes, std::size_t grid_size) {
    if (grid_size < 2 * modes + 2) {
        throw AliasingError("grid of " + std::to_string(grid_size) + " points cannot resolve " +
                            std::to_string(modes) + " modes");
    }
}

// Spectrum of η^{(n)} in FFT order for a cosine profile.
std::vector<Complex> derivative_spectrum(const SpectralProfile& profile, int order,
                                         std::size_t grid_size) {
    std::vector<Complex> coeffs(grid_size, Complex(0.0, 0.0));
    for (std::size_t j = 1; j <= profile.modes(); ++j) {
        const double half = 0.5 * profile.coefficient(j);
        const double k = static_cast<double>(j);
        coeffs[j] += half * integer_power(Complex(0.0, k), order);
        coeffs[grid_size - j] += half * integer_power(Complex(0.0, -k), order);
    }
    return coeffs;
}

GridFunction real_part(const std::vector<Complex>& values) {
    GridFunction out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
    return out;
}

}  // namespace

GridFunction eval_profile(const SpectralProfile& profile, std::size_t grid_size) {
    return spectral_derivative(profile, 0, grid_size);
}

GridFunction spectral_derivative(const SpectralProfile& profile, int order, std::size_t grid_size) {
    if (order < 0 || order > 5) throw DomainError("derivative order must lie in [0, 5]");
    require_grid(profile.modes(), grid_size);
    return real_part(synthesize(derivative_spectrum(profile, order, grid_size)));
}

SpectralProfile cosine_projection(const GridFunction& eta, std::size_t modes) {
    require_grid(modes, eta.size());
    const auto coeffs = fourier_coefficients(eta.values());
    std::vector<double> a(modes);
    for (std::size_t j = 1; j <= modes; ++j) {
        a[j - 1] = (mode(coeffs, static_cast<long>(j)) + mode(coeffs, -static_cast<long>(j))).real();
    }
    return SpectralProfile(std::move(a));
}

GridFunction p_flex(const GridFunction& eta, IceModel model) {
    if (model == IceModel::LinearBiharmonic) return differentiate(eta, 4);

    const std::size_t m = eta.size();
    const GridFunction ex = differentiate(eta, 1);
    const GridFunction exx = differentiate(eta, 2);
    GridFunction bending(m), twist(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = 1.0 + ex[i] * ex[i];
        bending[i] = exx[i] / std::pow(s, 2.5);
        twist[i] = exx[i] * exx[i] * ex[i] / std::pow(s, 3.5);
    }
    const GridFunction outer2 = differentiate(bending, 2);
    const GridFunction outer1 = differentiate(twist, 1);
    GridFunction out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = outer2[i] + 2.5 * outer1[i];
    return out;
}

GridFunction p_flex(const SpectralProfile& profile, IceModel model, std::size_t grid_size) {
    require_grid(profile.modes(), grid_size);
    if (model == IceModel::LinearBiharmonic) return spectral_derivative(profile, 4, grid_size);
    return p_flex(eval_profile(profile, grid_size), model);
}

GridFunction qx_from_profile(const TravelingWave& wave, std::size_t grid_size) {
    const GridFunction eta = eval_profile(wave.profile, grid_size);
    const GridFunction ex = spectral_derivative(wave.profile, 1, grid_size);
    const GridFunction pf = p_flex(wave.profile, wave.model, grid_size);
    const double g = wave.params.g;
    const double D = wave.params.D;
    GridFunction out(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double radicand = wave.c * wave.c - 2.0 * g * eta[i] - 2.0 * D * pf[i];
        if (!(radicand > 0.0)) {
            throw NonpositiveRadicand("c^2 - 2g*eta - 2D*P_flex = " + std::to_string(radicand) +
                                      " at x = " + std::to_string(eta.x(i)));
        }
        out[i] = wave.c - std::sqrt((1.0 + ex[i] * ex[i]) * radicand);
    }
    return out;
}

}  // namespace flexwave
