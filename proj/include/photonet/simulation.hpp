#pragma once

// Frequency sweeps of a parsed circuit and their CSV / JSON serialization.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonet/netlist.hpp"
#include "photonet/network.hpp"
#include "photonet/reduction.hpp"
#include "photonet/response.hpp"

namespace photonet {

inline constexpr int output_schema_version = 1;

struct PointResult {
    bool singular = false;
    double condition = 0.0;
    std::vector<std::array<complex, 2>> fields;  // per detector, x then y
    std::vector<double> intensities;             // NaN when singular
};

enum class GridKind { wavelength, frequency };

struct SweepGrid {
    GridKind kind = GridKind::wavelength;
    std::vector<double> values;  // wavelength (m) or ω (rad/s)
    std::vector<double> omegas;
};

/// linspace including both endpoints.
inline std::vector<double> linspace(double start, double stop, int points) {
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) { v[0] = start; return v; }
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = start + static_cast<double>(i) * step;
    v.back() = stop;
    return v;
}

inline SweepGrid make_grid(const SweepConfig& sweep) {
    SweepGrid g;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WavelengthSweep>) {
                g.kind = GridKind::wavelength;
                g.values = linspace(s.start, s.stop, s.points);
            } else if constexpr (std::is_same_v<T, FrequencySweep>) {
                g.kind = GridKind::frequency;
                g.values = linspace(s.start, s.stop, s.points);
            } else {
                g.kind = GridKind::wavelength;
                g.values = {s.wavelength};
            }
        },
        sweep);
    g.omegas.reserve(g.values.size());
    for (double v : g.values) g.omegas.push_back(g.kind == GridKind::wavelength ? omega_from_wavelength(v) : v);
    return g;
}

struct SweepResult {
    SweepGrid grid;
    std::vector<std::string> detector_names;
    std::vector<PointResult> points;
    int m = 0;
    std::size_t component_count = 0;
    std::size_t connection_count = 0;
    double condition_max = 0.0;
    double wall_time_s = 0.0;

    std::size_t singular_count() const {
        return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.singular; }));
    }
};

/// A validated circuit ready to evaluate at any optical frequency. The
/// connection matrix is topological and built once, in the constructor.
class Simulator {
public:
    explicit Simulator(CircuitDescription circuit) : circuit_(std::move(circuit)), validated_(validate(circuit_)) {
        m_ = validated_.port_map.total_ports();
        g_ = assemble_connection_matrix(validated_.connections, m_);
        ++connection_matrix_builds_;
        e_o_ = ComplexVector(static_cast<std::size_t>(2 * m_));
        for (const auto& s : circuit_.sources) {
            const auto c = port_coordinate(validated_.global_port(s.port));
            e_o_[c] += s.pol[0];
            e_o_[c + 1] += s.pol[1];
        }
        for (const auto& d : circuit_.detectors) detector_ports_.push_back(validated_.global_port(d.port));
    }

    const CircuitDescription& circuit() const noexcept { return circuit_; }
    const ValidatedCircuit& validated() const noexcept { return validated_; }
    const ComplexMatrix& connection_matrix() const noexcept { return g_; }
    const ComplexVector& launch() const noexcept { return e_o_; }
    const std::vector<int>& detector_ports() const noexcept { return detector_ports_; }
    int total_ports() const noexcept { return m_; }
    int connection_matrix_builds() const noexcept { return connection_matrix_builds_; }

    std::vector<ScatteringBlock> blocks(double omega) const {
        std::vector<ScatteringBlock> b;
        b.reserve(circuit_.components.size());
        for (const auto& c : circuit_.components) b.push_back(component_block(c.spec, omega));
        return b;
    }

    ComplexMatrix global_scattering(double omega) const {
        const auto b = blocks(omega);
        return assemble_global_scattering(b, validated_.port_map);
    }

    /// H at `omega`; throws SingularMatrixError at an exact lossless resonance.
    ComplexMatrix transfer(double omega, double* condition = nullptr) const {
        return solve_transfer(global_scattering(omega), g_, condition);
    }

    PointResult evaluate(double omega) const {
        PointResult r;
        const auto nd = detector_ports_.size();
        try {
            const auto h = transfer(omega, &r.condition);
            const auto e_out = propagate(h, e_o_);
            for (int p : detector_ports_) {
                const auto c = port_coordinate(p);
                r.fields.push_back({e_out[c], e_out[c + 1]});
                r.intensities.push_back(std::norm(e_out[c]) + std::norm(e_out[c + 1]));
            }
        } catch (const SingularMatrixError& e) {
            r.singular = true;
            r.condition = e.condition();
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            r.fields.assign(nd, {complex(nan, nan), complex(nan, nan)});
            r.intensities.assign(nd, nan);
        }
        return r;
    }

    /// Evaluates every grid point; results are in grid order regardless of `threads`.
    SweepResult run(const SweepGrid& grid, unsigned threads = 1) const {
        const auto t0 = std::chrono::steady_clock::now();
        SweepResult out;
        out.grid = grid;
        for (const auto& d : circuit_.detectors) out.detector_names.push_back(d.port.str());
        out.points.resize(grid.omegas.size());
        threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.omegas.size())));
        auto work = [&](unsigned worker) {
            for (std::size_t i = worker; i < grid.omegas.size(); i += threads) out.points[i] = evaluate(grid.omegas[i]);
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        }
        out.m = m_;
        out.component_count = circuit_.components.size();
        out.connection_count = validated_.connections.size();
        for (const auto& p : out.points) out.condition_max = std::max(out.condition_max, p.condition);
        out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    SweepResult run(unsigned threads = 1) const {
        if (!circuit_.sweep) throw ValidationError("circuit has no sweep directive");
        return run(make_grid(*circuit_.sweep), threads);
    }

private:
    CircuitDescription circuit_;
    ValidatedCircuit validated_;
    int m_ = 0;
    ComplexMatrix g_;
    ComplexVector e_o_;
    std::vector<int> detector_ports_;
    int connection_matrix_builds_ = 0;
};

/// |ĥ(τ)| per detector from the swept field amplitudes. Needs a uniform ω grid
/// with no singular points.
struct ImpulseTable {
    std::vector<double> tau;
    std::vector<std::vector<double>> magnitude;  // per detector
};

inline ImpulseTable detector_impulse(const SweepResult& r) {
    if (r.grid.kind != GridKind::frequency) throw GridError("impulse response requires a frequency sweep (uniform in ω)");
    if (r.singular_count() != 0) throw GridError("impulse response is undefined with singular grid points");
    const auto grid = UniformGrid::from_samples(r.grid.omegas);
    ImpulseTable t;
    t.tau = grid.dual().values();
    for (std::size_t d = 0; d < r.detector_names.size(); ++d) {
        std::vector<ComplexMatrix> samples;
        samples.reserve(r.points.size());
        for (const auto& p : r.points) samples.push_back(ComplexMatrix(2, 1, {p.fields[d][0], p.fields[d][1]}));
        const auto ir = impulse_response(grid, samples);
        std::vector<double> mag;
        for (const auto& h : ir.h_samples) mag.push_back(std::sqrt(std::norm(h(0, 0)) + std::norm(h(1, 0))));
        t.magnitude.push_back(std::move(mag));
    }
    return t;
}

struct OutputOptions {
    bool amplitudes = false;
    bool impulse = false;
};

namespace output_detail {
inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace output_detail

inline const char* grid_column_name(GridKind k) { return k == GridKind::wavelength ? "wavelength_m" : "omega_rad_s"; }

inline void write_csv(std::ostream& os, const SweepResult& r, const OutputOptions& opt) {
    using output_detail::num;
    os << grid_column_name(r.grid.kind);
    for (const auto& d : r.detector_names) os << ",I_" << d;
    if (opt.amplitudes)
        for (const auto& d : r.detector_names) os << ',' << d << "_ex_re," << d << "_ex_im," << d << "_ey_re," << d << "_ey_im";
    os << '\n';
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        os << num(r.grid.values[i]);
        for (double v : p.intensities) os << ',' << num(v);
        if (opt.amplitudes)
            for (const auto& f : p.fields)
                os << ',' << num(f[0].real()) << ',' << num(f[0].imag()) << ',' << num(f[1].real()) << ',' << num(f[1].imag());
        os << '\n';
    }
    if (opt.impulse) {
        const auto t = detector_impulse(r);
        os << '\n' << "tau_s";
        for (const auto& d : r.detector_names) os << ",h_" << d;
        os << '\n';
        for (std::size_t k = 0; k < t.tau.size(); ++k) {
            os << num(t.tau[k]);
            for (const auto& m : t.magnitude) os << ',' << num(m[k]);
            os << '\n';
        }
    }
}

inline nlohmann::json to_json(const SweepResult& r, const OutputOptions& opt) {
    using nlohmann::json;
    auto value = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json j;
    j["schema_version"] = output_schema_version;
    j["grid"] = {{"kind", r.grid.kind == GridKind::wavelength ? "wavelength" : "frequency"},
                 {"unit", r.grid.kind == GridKind::wavelength ? "m" : "rad/s"},
                 {"values", r.grid.values}};
    json dets = json::array();
    for (std::size_t d = 0; d < r.detector_names.size(); ++d) {
        json det;
        det["port"] = r.detector_names[d];
        json inten = json::array();
        for (const auto& p : r.points) inten.push_back(value(p.intensities[d]));
        det["intensity"] = std::move(inten);
        if (opt.amplitudes) {
            json ex = json::array(), ey = json::array();
            for (const auto& p : r.points) {
                const auto& f = p.fields[d];
                ex.push_back(p.singular ? json(nullptr) : json::array({f[0].real(), f[0].imag()}));
                ey.push_back(p.singular ? json(nullptr) : json::array({f[1].real(), f[1].imag()}));
            }
            det["ex"] = std::move(ex);
            det["ey"] = std::move(ey);
        }
        dets.push_back(std::move(det));
    }
    j["detectors"] = std::move(dets);
    json flags = json::array();
    for (const auto& p : r.points) flags.push_back(p.singular ? "singular" : "ok");
    j["status"] = std::move(flags);
    j["metadata"] = {{"m", r.m},
                     {"components", r.component_count},
                     {"connections", r.connection_count},
                     {"condition_max", value(r.condition_max)},
                     {"singular_points", r.singular_count()},
                     {"wall_time_s", r.wall_time_s}};
    if (opt.impulse) {
        const auto t = detector_impulse(r);
        json imp;
        imp["tau_s"] = t.tau;
        json mags = json::object();
        for (std::size_t d = 0; d < r.detector_names.size(); ++d) mags[r.detector_names[d]] = t.magnitude[d];
        imp["magnitude"] = std::move(mags);
        j["impulse"] = std::move(imp);
    }
    return j;
}

}  // namespace photonet
