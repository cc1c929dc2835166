#pragma once

// Jones matrices and scattering blocks for the component catalog.
//
// Conventions used throughout:
//  - forward propagation through a medium multiplies by exp(+i·ω·n·z/c); the
//    time factor exp(-iωt) is dropped.
//  - a port carries two coordinates, x then y.
//  - a block maps incoming amplitudes to outgoing amplitudes,
//    out = block · in, with ports in local order.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "photonet/matrix.hpp"

namespace photonet {

inline constexpr double speed_of_light = 299792458.0;  // m/s

inline double omega_from_wavelength(double wavelength) { return 2.0 * std::numbers::pi * speed_of_light / wavelength; }
inline double wavelength_from_omega(double omega) { return 2.0 * std::numbers::pi * speed_of_light / omega; }

class ComponentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PassivityError : public ComponentError {
public:
    using ComponentError::ComponentError;
};

struct Waveguide {
    double index_n = 1.0;
    double length_z = 0.0;           // m
    double birefringence_dn = 0.0;   // slow-axis excess index
    double axis_angle = 0.0;         // rad
    double amplitude_loss_alpha = 0.0;  // Np/m
    double extra_phase_phi = 0.0;    // rad
    friend bool operator==(const Waveguide&, const Waveguide&) = default;
};

struct Coupler {
    double power_coupling_kappa = 0.5;
    double excess_amplitude_loss = 0.0;
    friend bool operator==(const Coupler&, const Coupler&) = default;
};

struct Mirror {
    complex amplitude_reflectance_r{0.0, 0.0};
    friend bool operator==(const Mirror&, const Mirror&) = default;
};

struct Rotator {
    double angle_theta = 0.0;
    friend bool operator==(const Rotator&, const Rotator&) = default;
};

struct Retarder {
    double retardance_delta = 0.0;
    double axis_angle = 0.0;
    friend bool operator==(const Retarder&, const Retarder&) = default;
};

struct Polarizer {
    double axis_angle = 0.0;
    double extinction_amplitude = 0.0;
    friend bool operator==(const Polarizer&, const Polarizer&) = default;
};

struct Splice {
    double amplitude_transmission = 1.0;
    double rotation_angle = 0.0;
    complex backreflection_amplitude{0.0, 0.0};
    friend bool operator==(const Splice&, const Splice&) = default;
};

using ComponentSpec = std::variant<Waveguide, Coupler, Mirror, Rotator, Retarder, Polarizer, Splice>;

inline int port_count(const ComponentSpec& spec) { return std::holds_alternative<Coupler>(spec) ? 4 : 2; }

inline const char* type_name(const ComponentSpec& spec) {
    static constexpr const char* names[] = {"waveguide", "coupler", "mirror", "rotator",
                                            "retarder",  "polarizer", "splice"};
    return names[spec.index()];
}

/// Throws ComponentError if any field is outside its allowed range.
inline void check_ranges(const ComponentSpec& spec) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    auto finite = [](double v) { return std::isfinite(v); };
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Waveguide>) {
                if (!(c.length_z >= 0.0)) throw ComponentError("waveguide: negative length");
                if (!finite(c.index_n) || !finite(c.birefringence_dn) || !finite(c.axis_angle) ||
                    !finite(c.extra_phase_phi) || !finite(c.length_z))
                    throw ComponentError("waveguide: non-finite parameter");
                if (!(c.amplitude_loss_alpha >= 0.0)) throw ComponentError("waveguide: negative loss");
            } else if constexpr (std::is_same_v<T, Coupler>) {
                if (!in_unit(c.power_coupling_kappa)) throw ComponentError("coupler: kappa outside [0,1]");
                if (!in_unit(c.excess_amplitude_loss)) throw ComponentError("coupler: loss outside [0,1]");
            } else if constexpr (std::is_same_v<T, Mirror>) {
                if (!(std::abs(c.amplitude_reflectance_r) <= 1.0)) throw ComponentError("mirror: |r| > 1");
            } else if constexpr (std::is_same_v<T, Rotator>) {
                if (!finite(c.angle_theta)) throw ComponentError("rotator: non-finite angle");
            } else if constexpr (std::is_same_v<T, Retarder>) {
                if (!finite(c.retardance_delta) || !finite(c.axis_angle))
                    throw ComponentError("retarder: non-finite parameter");
            } else if constexpr (std::is_same_v<T, Polarizer>) {
                if (!finite(c.axis_angle)) throw ComponentError("polarizer: non-finite angle");
                if (!in_unit(c.extinction_amplitude)) throw ComponentError("polarizer: extinction outside [0,1]");
            } else if constexpr (std::is_same_v<T, Splice>) {
                if (!(c.amplitude_transmission > 0.0 && c.amplitude_transmission <= 1.0))
                    throw ComponentError("splice: transmission outside (0,1]");
                if (!(std::abs(c.backreflection_amplitude) < 1.0))
                    throw ComponentError("splice: |backreflection| >= 1");
                if (!finite(c.rotation_angle)) throw ComponentError("splice: non-finite angle");
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Jones matrices

inline ComplexMatrix jones_rotator(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {{c, -s}, {s, c}};
}

/// R(angle) · diag(d0, d1) · R(-angle): a diagonal element whose eigen-axes are rotated by `angle`.
inline ComplexMatrix rotated_diagonal(complex d0, complex d1, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {{c * c * d0 + s * s * d1, c * s * (d0 - d1)}, {c * s * (d0 - d1), s * s * d0 + c * c * d1}};
}

inline ComplexMatrix jones_waveguide(const Waveguide& w, double omega) {
    if (!(omega > 0.0)) throw ComponentError("waveguide: omega must be positive");
    if (w.length_z < 0.0) throw ComponentError("waveguide: negative length");
    const double k0z = omega * w.length_z / speed_of_light;
    const double decay = -w.amplitude_loss_alpha * w.length_z;
    const complex fast = std::exp(complex(decay, k0z * w.index_n - w.extra_phase_phi));
    const complex slow = std::exp(complex(decay, k0z * (w.index_n + w.birefringence_dn) - w.extra_phase_phi));
    return rotated_diagonal(fast, slow, w.axis_angle);
}

/// Linear retarder: phase delay `delta` on the axis at angle + π/2.
inline ComplexMatrix jones_retarder(const Retarder& r) {
    return rotated_diagonal(1.0, std::exp(complex(0.0, r.retardance_delta)), r.axis_angle);
}

/// Partial linear polarizer transmitting along `axis_angle`.
inline ComplexMatrix jones_polarizer(const Polarizer& p) {
    return rotated_diagonal(1.0, p.extinction_amplitude, p.axis_angle);
}

// ---------------------------------------------------------------------------
// Scattering blocks

/// Passive scattering matrix of a 2- or 4-port element (dimension 2·port_count).
class ScatteringBlock {
public:
    ScatteringBlock(int port_count, ComplexMatrix matrix) : port_count_(port_count), matrix_(std::move(matrix)) {
        if (port_count_ != 2 && port_count_ != 4) throw ComponentError("ScatteringBlock: port count must be 2 or 4");
        const auto dim = static_cast<std::size_t>(2 * port_count_);
        if (matrix_.rows() != dim || matrix_.cols() != dim)
            throw DimensionError("ScatteringBlock: matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
        if (!matrix_.all_finite()) throw ComponentError("ScatteringBlock: non-finite entry");
        if (!is_passive(matrix_)) throw PassivityError("ScatteringBlock: largest singular value exceeds 1");
    }

    int port_count() const noexcept { return port_count_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

    /// 2×2 sub-block: output at local port `out_port` from input at `in_port` (1-based).
    ComplexMatrix transfer(int out_port, int in_port) const {
        return matrix_.block(static_cast<std::size_t>(2 * (out_port - 1)), static_cast<std::size_t>(2 * (in_port - 1)), 2, 2);
    }

private:
    int port_count_;
    ComplexMatrix matrix_;
};

/// Two-port element. Basis [A_x, A_y, B_x, B_y]; `forward` carries A→B and
/// `backward` carries B→A.
inline ScatteringBlock two_port_block(const ComplexMatrix& forward, const ComplexMatrix& backward,
                                      const ComplexMatrix& refl_at_a, const ComplexMatrix& refl_at_b) {
    for (const auto* m : {&forward, &backward, &refl_at_a, &refl_at_b})
        if (m->rows() != 2 || m->cols() != 2) throw DimensionError("two_port_block: sub-blocks must be 2x2");
    ComplexMatrix s(4, 4);
    s.set_block(0, 0, refl_at_a);
    s.set_block(0, 2, backward);
    s.set_block(2, 0, forward);
    s.set_block(2, 2, refl_at_b);
    return ScatteringBlock(2, std::move(s));
}

/// Reflectionless two-port with reciprocal backward path (backward = forwardᵀ).
inline ScatteringBlock reciprocal_two_port(const ComplexMatrix& forward) {
    const ComplexMatrix zero(2, 2);
    return two_port_block(forward, forward.transpose(), zero, zero);
}

/// Symmetric partially reflecting mirror: reflection r from both faces,
/// transmission i·√(1−|r|²)·e^{i·arg r}, which makes the block unitary.
inline ScatteringBlock mirror_block(const Mirror& m) {
    const complex r = m.amplitude_reflectance_r;
    if (!(std::abs(r) <= 1.0)) throw ComponentError("mirror: |r| > 1");
    const double mag = std::abs(r);
    const double t = std::sqrt(std::max(0.0, 1.0 - mag * mag));
    const complex phase = mag > 0.0 ? r / mag : complex(1.0);
    const complex tau = complex(0.0, t) * phase;
    const auto I = ComplexMatrix::identity(2);
    return two_port_block(I * tau, I * tau, I * r, I * r);
}

/// Splice: transmission a·R(θ) forward and a·R(−θ) backward, backreflection b·I on both faces.
inline ScatteringBlock splice_block(const Splice& s) {
    check_ranges(s);
    const auto I = ComplexMatrix::identity(2);
    const auto fwd = jones_rotator(s.rotation_angle) * complex(s.amplitude_transmission);
    return two_port_block(fwd, fwd.transpose(), I * s.backreflection_amplitude, I * s.backreflection_amplitude);
}

/// Directional coupler. Ports 1,2 on the left face, 3,4 on the right. Bar
/// amplitude γ√(1−κ) on 1↔3 and 2↔4; cross amplitude iγ√κ on 1↔4 and 2↔3.
inline ScatteringBlock coupler_block(const Coupler& c, double /*omega*/ = 0.0) {
    check_ranges(c);
    const double gamma = 1.0 - c.excess_amplitude_loss;
    const complex bar = gamma * std::sqrt(1.0 - c.power_coupling_kappa);
    const complex cross = complex(0.0, gamma * std::sqrt(c.power_coupling_kappa));
    ComplexMatrix s(8, 8);
    auto place = [&](int out_port, int in_port, complex v) {
        const auto r = static_cast<std::size_t>(2 * (out_port - 1));
        const auto q = static_cast<std::size_t>(2 * (in_port - 1));
        s(r, q) = v;
        s(r + 1, q + 1) = v;
    };
    for (auto [a, b] : {std::pair{1, 3}, {2, 4}}) {
        place(b, a, bar);
        place(a, b, bar);
    }
    for (auto [a, b] : {std::pair{1, 4}, {2, 3}}) {
        place(b, a, cross);
        place(a, b, cross);
    }
    return ScatteringBlock(4, std::move(s));
}

/// Forward (port 1 → port 2) Jones matrix of a two-port catalog component.
inline ComplexMatrix forward_jones(const ComponentSpec& spec, double omega) {
    return std::visit(
        [&](const auto& c) -> ComplexMatrix {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Waveguide>) return jones_waveguide(c, omega);
            else if constexpr (std::is_same_v<T, Rotator>) return jones_rotator(c.angle_theta);
            else if constexpr (std::is_same_v<T, Retarder>) return jones_retarder(c);
            else if constexpr (std::is_same_v<T, Polarizer>) return jones_polarizer(c);
            else if constexpr (std::is_same_v<T, Splice>)
                return jones_rotator(c.rotation_angle) * complex(c.amplitude_transmission);
            else if constexpr (std::is_same_v<T, Mirror>) return mirror_block(c).transfer(2, 1);
            else throw ComponentError("forward_jones: coupler has no single forward path");
        },
        spec);
}

/// Scattering block of any catalog component at optical frequency `omega`.
inline ScatteringBlock component_block(const ComponentSpec& spec, double omega) {
    check_ranges(spec);
    return std::visit(
        [&](const auto& c) -> ScatteringBlock {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Coupler>) return coupler_block(c, omega);
            else if constexpr (std::is_same_v<T, Mirror>) return mirror_block(c);
            else if constexpr (std::is_same_v<T, Splice>) return splice_block(c);
            else if constexpr (std::is_same_v<T, Rotator>) {
                // Reciprocal rotation: the backward pass is the transpose, R(−θ).
                return reciprocal_two_port(jones_rotator(c.angle_theta));
            } else return reciprocal_two_port(forward_jones(spec, omega));
        },
        spec);
}

/// True when the block equals its transpose within `tol` (reciprocal element).
inline bool is_reciprocal(const ScatteringBlock& b, double tol = 1e-12) {
    return max_abs_diff(b.matrix(), b.matrix().transpose()) <= tol;
}

}  // namespace photonet
