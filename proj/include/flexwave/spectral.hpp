#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace flexwave {

using Complex = std::complex<double>;

/// Samples of a 2π-periodic real function at x_i = 2πi/M.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::vector<double> values) : values_(std::move(values)) {}
    explicit GridFunction(std::size_t size, double fill = 0.0) : values_(size, fill) {}

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }

    /// Grid abscissa x_i.
    double x(std::size_t i) const;
    double max_abs() const;

private:
    std::vector<double> values_;
};

/// Normalised discrete Fourier coefficients ĉ_k = (1/M) Σ f(x_i) e^{-ikx_i},
/// stored in FFT order (index k for k < M/2, index M+k for negative k).
std::vector<Complex> fourier_coefficients(std::span<const double> samples);
std::vector<Complex> fourier_coefficients(std::span<const Complex> samples);

/// Inverse of fourier_coefficients: f(x_i) = Σ ĉ_k e^{ikx_i}.
std::vector<Complex> synthesize(std::span<const Complex> coeffs);

/// Coefficient ĉ_k for signed k from an FFT-ordered coefficient array.
inline Complex mode(std::span<const Complex> coeffs, long k) {
    const long m = static_cast<long>(coeffs.size());
    return coeffs[static_cast<std::size_t>(((k % m) + m) % m)];
}

/// n-th derivative of a real periodic grid function via the multiplier (ik)^n.
/// The Nyquist mode is dropped for odd n.
GridFunction differentiate(const GridFunction& f, int order);

/// base^n by repeated multiplication (exact for the small n used here).
Complex integer_power(Complex base, int n);

/// Smallest power of two ≥ n.
std::size_t next_power_of_two(std::size_t n);

bool is_power_of_two(std::size_t n);

}  // namespace flexwave
