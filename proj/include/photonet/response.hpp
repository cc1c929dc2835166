#pragma once

// Detected intensity, photocurrent and broadband response.
//
// Continuous transforms use the symmetric normalization a = (2π)^(-1/2):
//   ĥ(τ) = a ∫ H(ω) e^{+iωτ} dω,      H(ω) = a ∫ ĥ(τ) e^{-iωτ} dτ.
// On N uniform samples ω_n = ω₀ + nΔω they become
//   ĥ(τ_k) = a·Δω·Σ_n H_n e^{iω_nτ_k},  τ_k = (k − N/2)·Δτ,  Δτ = 2π/(N·Δω),
//   H_n    = a·Δτ·Σ_k ĥ_k e^{−iω_nτ_k},
// which is an exact round trip and satisfies Σ|ĥ|²Δτ = Σ|H|²Δω.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "photonet/matrix.hpp"
#include "photonet/reduction.hpp"

namespace photonet {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const double transform_normalization = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// ---------------------------------------------------------------------------
// Intensities

/// (1,1)·|E|² for a two-coordinate field.
inline double intensity(const ComplexVector& e) {
    if (e.dim() != 2) throw DimensionError("intensity: field must have 2 coordinates");
    return std::norm(e[0]) + std::norm(e[1]);
}

/// (1,1)·|Â_k Ĥ Â_jᵀ E_in|²
inline double intensity_at_port(int k_out, int j_in, const ComplexMatrix& h, const ComplexVector& e_in) {
    if (e_in.dim() != 2) throw DimensionError("intensity_at_port: launch field must have 2 coordinates");
    return intensity(extract_jones(k_out, j_in, h) * e_in);
}

// ---------------------------------------------------------------------------
// Grids

struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double back() const { return at(count - 1); }

    std::vector<double> values() const {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = at(i);
        return v;
    }

    /// Accepts ascending samples spaced uniformly to 1 part in 1e9.
    static UniformGrid from_samples(std::span<const double> samples) {
        if (samples.size() < 2) throw GridError("grid needs at least 2 points");
        const double step = (samples.back() - samples.front()) / static_cast<double>(samples.size() - 1);
        if (!(step > 0.0)) throw GridError("grid must be strictly ascending");
        const double scale = std::max(std::abs(samples.front()), std::abs(samples.back()));
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double expected = samples.front() + static_cast<double>(i) * step;
            if (std::abs(samples[i] - expected) > 1e-9 * std::max(scale, step))
                throw GridError("grid is not uniform at sample " + std::to_string(i));
        }
        return {samples.front(), step, samples.size()};
    }

    /// Dual τ grid: τ_k = (k − N/2)·2π/(N·Δω).
    UniformGrid dual() const {
        const double dtau = 2.0 * std::numbers::pi / (static_cast<double>(count) * step);
        return {-static_cast<double>(count / 2) * dtau, dtau, count};
    }

    /// Baseband grid with the same spacing, zero at index N/2.
    UniformGrid centered() const { return {-static_cast<double>(count / 2) * step, step, count}; }
};

inline double trapezoid(std::span<const double> y, double step) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * step;
}

// ---------------------------------------------------------------------------
// Discrete transforms

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place Σ_n x_n e^{sign·2πi nk/N} (unnormalized). Radix-2 for powers of two,
/// direct summation otherwise.
inline void dft(std::vector<complex>& x, int sign) {
    const std::size_t n = x.size();
    if (n <= 1) return;
    if (!is_power_of_two(n)) {
        std::vector<complex> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            complex s{};
            for (std::size_t j = 0; j < n; ++j) {
                const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
                s += x[j] * std::polar(1.0, ang);
            }
            out[k] = s;
        }
        x = std::move(out);
        return;
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
                const complex w = std::polar(1.0, ang);
                const complex u = x[i + k];
                const complex v = x[i + k + half] * w;
                x[i + k] = u + v;
                x[i + k + half] = u - v;
            }
    }
}

inline double twiddle_angle(std::size_t n, std::size_t k0, std::size_t count) {
    return 2.0 * std::numbers::pi * static_cast<double>((n * k0) % count) / static_cast<double>(count);
}

}  // namespace detail

/// Samples on ω-grid → samples on the dual τ-grid.
inline std::vector<complex> inverse_transform(const UniformGrid& omega, std::span<const complex> samples) {
    if (samples.size() != omega.count) throw GridError("inverse_transform: sample count != grid size");
    const std::size_t n = omega.count;
    const std::size_t k0 = n / 2;
    const UniformGrid tau = omega.dual();
    std::vector<complex> x(samples.begin(), samples.end());
    for (std::size_t j = 0; j < n; ++j) x[j] *= std::polar(1.0, -detail::twiddle_angle(j, k0, n));
    detail::dft(x, +1);
    const double scale = transform_normalization * omega.step;
    for (std::size_t k = 0; k < n; ++k) x[k] *= scale * std::polar(1.0, omega.start * tau.at(k));
    return x;
}

/// Samples on the dual τ-grid of `omega` → samples on `omega`.
inline std::vector<complex> forward_transform(const UniformGrid& omega, std::span<const complex> tau_samples) {
    if (tau_samples.size() != omega.count) throw GridError("forward_transform: sample count != grid size");
    const std::size_t n = omega.count;
    const std::size_t k0 = n / 2;
    const UniformGrid tau = omega.dual();
    std::vector<complex> x(tau_samples.begin(), tau_samples.end());
    for (std::size_t k = 0; k < n; ++k) x[k] *= std::polar(1.0, -omega.start * tau.at(k));
    detail::dft(x, -1);
    const double scale = transform_normalization * tau.step;
    for (std::size_t j = 0; j < n; ++j) x[j] *= scale * std::polar(1.0, detail::twiddle_angle(j, k0, n));
    return x;
}

namespace detail {

inline void require_common_shape(std::span<const ComplexMatrix> samples) {
    if (samples.empty()) throw GridError("no samples");
    for (const auto& m : samples)
        if (m.rows() != samples.front().rows() || m.cols() != samples.front().cols())
            throw DimensionError("matrix samples differ in shape");
}

template <class Transform>
std::vector<ComplexMatrix> transform_entries(std::span<const ComplexMatrix> samples, Transform&& t) {
    require_common_shape(samples);
    const auto rows = samples.front().rows(), cols = samples.front().cols();
    std::vector<ComplexMatrix> out(samples.size(), ComplexMatrix(rows, cols));
    std::vector<complex> series(samples.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t i = 0; i < samples.size(); ++i) series[i] = samples[i](r, c);
            auto transformed = t(series);
            for (std::size_t i = 0; i < samples.size(); ++i) out[i](r, c) = transformed[i];
        }
    return out;
}

}  // namespace detail

struct ImpulseResponse {
    UniformGrid omega_grid;
    UniformGrid tau_grid;
    std::vector<ComplexMatrix> h_samples;
    double a = transform_normalization;
};

/// ĥ(τ) = a ∫ Ĥ(ω) e^{iωτ} dω, entry by entry.
inline ImpulseResponse impulse_response(const UniformGrid& omega, std::span<const ComplexMatrix> h_omega) {
    if (omega.count < 2) throw GridError("impulse_response: grid needs at least 2 points");
    if (h_omega.size() != omega.count) throw GridError("impulse_response: sample count != grid size");
    auto h = detail::transform_entries(h_omega, [&](const std::vector<complex>& s) { return inverse_transform(omega, s); });
    return {omega, omega.dual(), std::move(h)};
}

inline ImpulseResponse impulse_response(std::span<const double> omega_samples, std::span<const ComplexMatrix> h_omega) {
    return impulse_response(UniformGrid::from_samples(omega_samples), h_omega);
}

/// Inverse of impulse_response.
inline std::vector<ComplexMatrix> frequency_response(const ImpulseResponse& ir) {
    return detail::transform_entries(std::span<const ComplexMatrix>(ir.h_samples),
                                     [&](const std::vector<complex>& s) { return forward_transform(ir.omega_grid, s); });
}

// ---------------------------------------------------------------------------
// Sources and detectors

struct Monochromatic {
    double omega0;
};

/// Sampled amplitude spectrum F(ω), normalized so Σ|F|²Δω = 1. `center` is the
/// nominal carrier; detuning is measured from it.
class SampledSpectrum {
public:
    SampledSpectrum(std::vector<double> omega, std::vector<complex> amplitudes, double center)
        : grid_(UniformGrid::from_samples(omega)), amplitudes_(std::move(amplitudes)), center_(center) {
        if (amplitudes_.size() != grid_.count) throw GridError("source spectrum: amplitude count != grid size");
        double power = 0.0;
        for (auto f : amplitudes_) power += std::norm(f);
        power *= grid_.step;
        if (std::abs(power - 1.0) > 1e-9)
            throw GridError("source spectrum: sum |F|^2 dω = " + std::to_string(power) + ", expected 1");
    }
    SampledSpectrum(std::vector<double> omega, std::vector<complex> amplitudes)
        : SampledSpectrum(omega, std::move(amplitudes), 0.5 * (omega.front() + omega.back())) {}

    /// Rescales arbitrary samples to unit power.
    static SampledSpectrum normalized(std::vector<double> omega, std::vector<complex> amplitudes, double center) {
        const auto grid = UniformGrid::from_samples(omega);
        double power = 0.0;
        for (auto f : amplitudes) power += std::norm(f);
        power *= grid.step;
        if (!(power > 0.0)) throw GridError("source spectrum: zero power");
        const double s = 1.0 / std::sqrt(power);
        for (auto& f : amplitudes) f *= s;
        return SampledSpectrum(std::move(omega), std::move(amplitudes), center);
    }

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const complex> amplitudes() const noexcept { return amplitudes_; }
    double center() const noexcept { return center_; }

    /// Linear interpolation; zero outside the sampled range.
    complex at(double omega) const {
        const double u = (omega - grid_.start) / grid_.step;
        if (u < -1e-9 || u > static_cast<double>(grid_.count - 1) + 1e-9) return {};
        const double uc = std::clamp(u, 0.0, static_cast<double>(grid_.count - 1));
        const auto i = std::min(static_cast<std::size_t>(uc), grid_.count - 2);
        const double w = uc - static_cast<double>(i);
        return (1.0 - w) * amplitudes_[i] + w * amplitudes_[i + 1];
    }

private:
    UniformGrid grid_;
    std::vector<complex> amplitudes_;
    double center_;
};

using SourceSpectrum = std::variant<Monochromatic, SampledSpectrum>;

/// Gaussian line whose power spectrum |F|² has standard deviation `sigma` (rad/s).
inline SampledSpectrum gaussian_source(double center, double sigma, double span_sigmas, std::size_t points) {
    if (points < 2) throw GridError("gaussian_source: need at least 2 points");
    std::vector<double> omega(points);
    std::vector<complex> f(points);
    const double start = center - span_sigmas * sigma;
    const double step = 2.0 * span_sigmas * sigma / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        omega[i] = start + static_cast<double>(i) * step;
        const double d = (omega[i] - center) / sigma;
        f[i] = std::exp(-0.25 * d * d);
    }
    return SampledSpectrum::normalized(std::move(omega), std::move(f), center);
}

/// Source line shape resampled onto the baseband version of `grid`
/// (detuning ν_p = (p − N/2)·Δω). The source must fit inside that span.
inline std::vector<complex> baseband_line_shape(const SampledSpectrum& src, const UniformGrid& grid) {
    const UniformGrid nu = grid.centered();
    const double lo = src.grid().start - src.center();
    const double hi = src.grid().back() - src.center();
    const double tol = 1e-9 * grid.step;
    if (lo < nu.start - tol || hi > nu.back() + tol)
        throw GridError("source spectrum does not fit inside the response grid span");
    std::vector<complex> f(grid.count);
    for (std::size_t p = 0; p < grid.count; ++p) f[p] = src.at(src.center() + nu.at(p));
    return f;
}

/// Sampled real spectral quantity (responsivity, intensity density, ...).
struct RealSpectrum {
    std::vector<double> omega;
    std::vector<double> values;
};

struct DetectorSpec {
    RealSpectrum responsivity;

    explicit DetectorSpec(RealSpectrum r) : responsivity(std::move(r)) {
        if (responsivity.omega.size() != responsivity.values.size())
            throw GridError("detector: responsivity samples != grid size");
        for (double v : responsivity.values)
            if (!(v >= 0.0)) throw std::invalid_argument("detector: responsivity must be non-negative");
    }

    static DetectorSpec flat(std::vector<double> omega, double value) {
        std::vector<double> v(omega.size(), value);
        return DetectorSpec({std::move(omega), std::move(v)});
    }
};

/// I_PD = ∫ R(ω)·I(ω) dω by the trapezoid rule. A one-point spectrum is a
/// delta line: the result is R·I at that point.
inline double photocurrent(const DetectorSpec& det, const RealSpectrum& spectrum) {
    const auto& r = det.responsivity;
    if (r.omega.size() != spectrum.omega.size() || spectrum.omega.size() != spectrum.values.size())
        throw GridError("photocurrent: detector and intensity grids differ in size");
    if (spectrum.omega.empty()) throw GridError("photocurrent: empty spectrum");
    double scale = 0.0;
    for (double w : spectrum.omega) scale = std::max(scale, std::abs(w));
    for (std::size_t i = 0; i < spectrum.omega.size(); ++i)
        if (std::abs(r.omega[i] - spectrum.omega[i]) > 1e-9 * std::max(scale, 1.0))
            throw GridError("photocurrent: detector and intensity grids are not aligned");
    if (spectrum.omega.size() == 1) return r.values[0] * spectrum.values[0];
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < spectrum.omega.size(); ++i) {
        const double h = spectrum.omega[i + 1] - spectrum.omega[i];
        total += 0.5 * h * (r.values[i] * spectrum.values[i] + r.values[i + 1] * spectrum.values[i + 1]);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Broadband response

/// Ĥ_F = F ⊗ Ĥ = ∫ F(ν) Ĥ(ω − ν) dν, evaluated through τ as √(2π)·𝔉{f(τ)·ĥ(τ)}.
/// F is the source line shape about its center (see baseband_line_shape); the
/// grid is treated as periodic. A monochromatic source is the unit delta and
/// returns Ĥ unchanged.
inline std::vector<ComplexMatrix> broadband_response(const SourceSpectrum& source, const UniformGrid& grid,
                                                     std::span<const ComplexMatrix> h_omega) {
    if (h_omega.size() != grid.count) throw GridError("broadband_response: sample count != grid size");
    if (std::holds_alternative<Monochromatic>(source)) return {h_omega.begin(), h_omega.end()};
    const auto& sampled = std::get<SampledSpectrum>(source);
    const auto line = baseband_line_shape(sampled, grid);
    const auto f_tau = inverse_transform(grid.centered(), line);
    const auto ir = impulse_response(grid, h_omega);
    std::vector<ComplexMatrix> product = ir.h_samples;
    for (std::size_t k = 0; k < product.size(); ++k) product[k] *= f_tau[k] / transform_normalization;
    return detail::transform_entries(std::span<const ComplexMatrix>(product),
                                     [&](const std::vector<complex>& s) { return forward_transform(grid, s); });
}

/// Detected intensity as the source is tuned across `grid`:
///   I(ω_n) = ∫ |F(ν)|²·R(ω_n+ν)·P(ω_n + ν) dν,
/// where P is the monochromatic intensity response ((1,1)·|ĴE|²) on the
/// grid and R the responsivity (1 when empty). Computed through τ as the
/// product of the source autocorrelation (transform of |F|²) with the transform
/// of R·P; the grid is treated as periodic. Monochromatic returns R·P.
inline std::vector<double> broadband_intensity(const SourceSpectrum& source, const UniformGrid& grid,
                                               std::span<const double> p_omega,
                                               std::span<const double> responsivity = {}) {
    if (p_omega.size() != grid.count) throw GridError("broadband_intensity: sample count != grid size");
    if (!responsivity.empty() && responsivity.size() != grid.count)
        throw GridError("broadband_intensity: responsivity count != grid size");
    std::vector<complex> weighted(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        weighted[i] = p_omega[i] * (responsivity.empty() ? 1.0 : responsivity[i]);
    if (std::holds_alternative<Monochromatic>(source)) {
        std::vector<double> out(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) out[i] = weighted[i].real();
        return out;
    }
    const auto line = baseband_line_shape(std::get<SampledSpectrum>(source), grid);
    std::vector<complex> power(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) power[i] = std::norm(line[i]);
    const auto s_tau = inverse_transform(grid.centered(), power);
    const auto p_tau = inverse_transform(grid, weighted);
    std::vector<complex> product(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) product[k] = std::conj(s_tau[k]) * p_tau[k] / transform_normalization;
    const auto back = forward_transform(grid, product);
    std::vector<double> out(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) out[i] = back[i].real();
    return out;
}

}  // namespace photonet
