#include "flexwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace flexwave {

namespace {

// FFTW's planner is not thread safe; execution with the new-array interface is.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<Complex> in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                          reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

std::vector<Complex> transform(std::span<const Complex> in, int sign) {
    std::vector<Complex> src(in.begin(), in.end());
    std::vector<Complex> out(in.size());
    if (in.empty()) return out;
    fftw_plan plan = plan_cache().get(in.size(), sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

Complex integer_power(Complex base, int n) {
    Complex out(1.0, 0.0);
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}

double GridFunction::x(std::size_t i) const {
    return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<Complex> fourier_coefficients(std::span<const Complex> samples) {
    auto out = transform(samples, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(samples.size());
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<Complex> fourier_coefficients(std::span<const double> samples) {
    std::vector<Complex> tmp(samples.begin(), samples.end());
    return fourier_coefficients(std::span<const Complex>(tmp));
}

std::vector<Complex> synthesize(std::span<const Complex> coeffs) {
    return transform(coeffs, FFTW_BACKWARD);
}

GridFunction differentiate(const GridFunction& f, int order) {
    if (order == 0) return f;
    const std::size_t m = f.size();
    auto coeffs = fourier_coefficients(f.values());
    const long half = static_cast<long>(m / 2);
    for (std::size_t idx = 0; idx < m; ++idx) {
        long k = static_cast<long>(idx);
        if (k > half) k -= static_cast<long>(m);
        if (k == half && (order % 2 == 1)) {
            coeffs[idx] = 0.0;
            continue;
        }
        coeffs[idx] *= integer_power(Complex(0.0, static_cast<double>(k)), order);
    }
    auto values = synthesize(coeffs);
    GridFunction out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = values[i].real();
    return out;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace flexwave
