#pragma once

// Line-oriented circuit description:
//
//   component <name> <type> [key=value ...]
//   connect   <name>.<port#> <name>.<port#>
//   source    <name>.<port#> pol=<ex_re>,<ex_im>,<ey_re>,<ey_im>
//   detect    <name>.<port#>
//   sweep     wavelength <start> <stop> <points>
//   sweep     frequency <start> <stop> <points>     (rad/s)
//   sweep     single <wavelength>
//
// '#' starts a comment. Lengths accept m, um or nm suffixes; angles are rad.

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <variant>
#include <vector>

#include "photonet/components.hpp"
#include "photonet/network.hpp"

namespace photonet {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ComponentInstance {
    std::string name;
    ComponentSpec spec;
    int line = 0;
    friend bool operator==(const ComponentInstance& a, const ComponentInstance& b) {
        return a.name == b.name && a.spec == b.spec;
    }
};

struct PortRef {
    std::string instance;
    int port = 0;
    friend bool operator==(const PortRef&, const PortRef&) = default;
    std::string str() const { return instance + "." + std::to_string(port); }
};

struct Connection {
    PortRef a, b;
    int line = 0;
    friend bool operator==(const Connection& x, const Connection& y) { return x.a == y.a && x.b == y.b; }
};

struct SourceLaunch {
    PortRef port;
    std::array<complex, 2> pol{complex(1.0), complex(0.0)};
    int line = 0;
    friend bool operator==(const SourceLaunch& x, const SourceLaunch& y) { return x.port == y.port && x.pol == y.pol; }
};

struct DetectorTap {
    PortRef port;
    int line = 0;
    friend bool operator==(const DetectorTap& x, const DetectorTap& y) { return x.port == y.port; }
};

struct WavelengthSweep {
    double start, stop;  // m
    int points;
    friend bool operator==(const WavelengthSweep&, const WavelengthSweep&) = default;
};
struct FrequencySweep {
    double start, stop;  // rad/s
    int points;
    friend bool operator==(const FrequencySweep&, const FrequencySweep&) = default;
};
struct SingleWavelength {
    double wavelength;  // m
    friend bool operator==(const SingleWavelength&, const SingleWavelength&) = default;
};

using SweepConfig = std::variant<WavelengthSweep, FrequencySweep, SingleWavelength>;

struct CircuitDescription {
    std::vector<ComponentInstance> components;
    std::vector<Connection> connections;
    std::vector<SourceLaunch> sources;
    std::vector<DetectorTap> detectors;
    std::optional<SweepConfig> sweep;

    friend bool operator==(const CircuitDescription&, const CircuitDescription&) = default;

    const ComponentInstance* find(std::string_view name) const {
        for (const auto& c : components)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace netlist_detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<double> to_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline double parse_real(int line, std::string_view key, std::string_view s) {
    auto v = to_double(s);
    if (!v) throw ParseError(line, "malformed number '" + std::string(s) + "' for " + std::string(key));
    return *v;
}

/// Plain meters or a value with an m/mm/um/nm suffix.
inline double parse_length(int line, std::string_view key, std::string_view s) {
    double divisor = 1.0;
    if (s.ends_with("nm")) { divisor = 1e9; s.remove_suffix(2); }
    else if (s.ends_with("um")) { divisor = 1e6; s.remove_suffix(2); }
    else if (s.ends_with("mm")) { divisor = 1e3; s.remove_suffix(2); }
    else if (s.ends_with("m")) { s.remove_suffix(1); }
    return parse_real(line, key, s) / divisor;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(',', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline complex parse_complex(int line, std::string_view key, std::string_view s) {
    auto parts = split_commas(s);
    if (parts.size() == 1) return parse_real(line, key, parts[0]);
    if (parts.size() == 2) return {parse_real(line, key, parts[0]), parse_real(line, key, parts[1])};
    throw ParseError(line, "malformed complex value '" + std::string(s) + "' for " + std::string(key));
}

inline bool valid_name(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

inline PortRef parse_port_ref(int line, std::string_view s) {
    auto dot = s.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size())
        throw ParseError(line, "expected <name>.<port#>, got '" + std::string(s) + "'");
    auto name = s.substr(0, dot);
    auto num = s.substr(dot + 1);
    int port = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), port);
    if (ec != std::errc() || ptr != num.data() + num.size() || port < 1)
        throw ParseError(line, "malformed port number in '" + std::string(s) + "'");
    if (!valid_name(name)) throw ParseError(line, "malformed instance name '" + std::string(name) + "'");
    return {std::string(name), port};
}

using Params = std::map<std::string, std::string_view, std::less<>>;

inline Params parse_params(int line, std::span<const std::string_view> tokens, std::initializer_list<std::string_view> allowed,
                           std::string_view type) {
    Params p;
    for (auto tok : tokens) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.size())
            throw ParseError(line, "expected key=value, got '" + std::string(tok) + "'");
        auto key = tok.substr(0, eq);
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) throw ParseError(line, "unknown key '" + std::string(key) + "' for " + std::string(type));
        if (!p.emplace(std::string(key), tok.substr(eq + 1)).second)
            throw ParseError(line, "key '" + std::string(key) + "' given twice");
    }
    return p;
}

inline ComponentSpec parse_component(int line, std::string_view type, std::span<const std::string_view> tokens) {
    auto real = [&](const Params& p, std::string_view key, double fallback) {
        auto it = p.find(key);
        return it == p.end() ? fallback : parse_real(line, key, it->second);
    };
    auto length = [&](const Params& p, std::string_view key, double fallback) {
        auto it = p.find(key);
        return it == p.end() ? fallback : parse_length(line, key, it->second);
    };
    auto cplx = [&](const Params& p, std::string_view key, complex fallback) {
        auto it = p.find(key);
        return it == p.end() ? fallback : parse_complex(line, key, it->second);
    };

    ComponentSpec spec;
    if (type == "waveguide") {
        auto p = parse_params(line, tokens, {"n", "length", "dn", "angle", "alpha", "phi"}, type);
        spec = Waveguide{real(p, "n", 1.0), length(p, "length", 0.0), real(p, "dn", 0.0),
                         real(p, "angle", 0.0), real(p, "alpha", 0.0), real(p, "phi", 0.0)};
    } else if (type == "coupler") {
        auto p = parse_params(line, tokens, {"kappa", "loss"}, type);
        spec = Coupler{real(p, "kappa", 0.5), real(p, "loss", 0.0)};
    } else if (type == "mirror") {
        auto p = parse_params(line, tokens, {"r"}, type);
        spec = Mirror{cplx(p, "r", 0.0)};
    } else if (type == "rotator") {
        auto p = parse_params(line, tokens, {"theta"}, type);
        spec = Rotator{real(p, "theta", 0.0)};
    } else if (type == "retarder") {
        auto p = parse_params(line, tokens, {"delta", "angle"}, type);
        spec = Retarder{real(p, "delta", 0.0), real(p, "angle", 0.0)};
    } else if (type == "polarizer") {
        auto p = parse_params(line, tokens, {"angle", "extinction"}, type);
        spec = Polarizer{real(p, "angle", 0.0), real(p, "extinction", 0.0)};
    } else if (type == "splice") {
        auto p = parse_params(line, tokens, {"t", "theta", "refl"}, type);
        spec = Splice{real(p, "t", 1.0), real(p, "theta", 0.0), cplx(p, "refl", 0.0)};
    } else {
        throw ParseError(line, "unknown component type '" + std::string(type) + "'");
    }
    try {
        check_ranges(spec);
    } catch (const ComponentError& e) {
        throw ParseError(line, e.what());
    }
    return spec;
}

inline int parse_points(int line, std::string_view s) {
    int n = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n < 1)
        throw ParseError(line, "sweep point count must be a positive integer, got '" + std::string(s) + "'");
    return n;
}

inline SweepConfig parse_sweep(int line, std::span<const std::string_view> t) {
    if (t.empty()) throw ParseError(line, "sweep needs a kind (wavelength, frequency or single)");
    auto check_range = [&](double a, double b, int n) {
        if (!(a > 0.0) || !(b > 0.0)) throw ParseError(line, "sweep bounds must be positive");
        if (n > 1 && !(a < b)) throw ParseError(line, "sweep start must be below stop");
        if (n == 1 && a > b) throw ParseError(line, "sweep start must not exceed stop");
    };
    if (t[0] == "wavelength" || t[0] == "frequency") {
        if (t.size() != 4) throw ParseError(line, "sweep " + std::string(t[0]) + " expects <start> <stop> <points>");
        const bool wl = t[0] == "wavelength";
        const double a = wl ? parse_length(line, "start", t[1]) : parse_real(line, "start", t[1]);
        const double b = wl ? parse_length(line, "stop", t[2]) : parse_real(line, "stop", t[2]);
        const int n = parse_points(line, t[3]);
        check_range(a, b, n);
        if (wl) return WavelengthSweep{a, b, n};
        return FrequencySweep{a, b, n};
    }
    if (t[0] == "single") {
        if (t.size() != 2) throw ParseError(line, "sweep single expects <wavelength>");
        const double w = parse_length(line, "wavelength", t[1]);
        if (!(w > 0.0)) throw ParseError(line, "wavelength must be positive");
        return SingleWavelength{w};
    }
    throw ParseError(line, "unknown sweep kind '" + std::string(t[0]) + "'");
}

}  // namespace netlist_detail

inline CircuitDescription parse_netlist(std::string_view text) {
    using namespace netlist_detail;
    CircuitDescription c;
    std::set<std::string, std::less<>> names;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        const auto kw = tok[0];
        std::span<const std::string_view> args(tok.data() + 1, tok.size() - 1);

        if (kw == "component") {
            if (args.size() < 2) throw ParseError(line_no, "component expects <name> <type> [key=value ...]");
            if (!valid_name(args[0])) throw ParseError(line_no, "malformed instance name '" + std::string(args[0]) + "'");
            if (!names.emplace(args[0]).second)
                throw ParseError(line_no, "component '" + std::string(args[0]) + "' declared twice");
            c.components.push_back({std::string(args[0]), parse_component(line_no, args[1], args.subspan(2)), line_no});
        } else if (kw == "connect") {
            if (args.size() != 2) throw ParseError(line_no, "connect expects two <name>.<port#> references");
            c.connections.push_back({parse_port_ref(line_no, args[0]), parse_port_ref(line_no, args[1]), line_no});
        } else if (kw == "source") {
            if (args.size() != 2 || !args[1].starts_with("pol="))
                throw ParseError(line_no, "source expects <name>.<port#> pol=<ex_re>,<ex_im>,<ey_re>,<ey_im>");
            auto parts = split_commas(args[1].substr(4));
            if (parts.size() != 4) throw ParseError(line_no, "pol needs four comma-separated reals");
            std::array<double, 4> v{};
            for (std::size_t i = 0; i < 4; ++i) v[i] = parse_real(line_no, "pol", parts[i]);
            c.sources.push_back({parse_port_ref(line_no, args[0]), {complex(v[0], v[1]), complex(v[2], v[3])}, line_no});
        } else if (kw == "detect") {
            if (args.size() != 1) throw ParseError(line_no, "detect expects one <name>.<port#> reference");
            c.detectors.push_back({parse_port_ref(line_no, args[0]), line_no});
        } else if (kw == "sweep") {
            if (c.sweep) throw ParseError(line_no, "only one sweep directive is allowed");
            c.sweep = parse_sweep(line_no, args);
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(kw) + "'");
        }
    }
    return c;
}

/// Global port numbering and topology of a parsed circuit.
struct ValidatedCircuit {
    PortMap port_map;
    ConnectionMap connections;
    std::vector<std::string> warnings;
    std::unordered_map<std::string, std::size_t> index_of;

    int global_port(const PortRef& ref) const {
        return port_map.global_port(index_of.at(ref.instance), ref.port);
    }
};

/// Assigns global ports in declaration order and checks every reference.
inline ValidatedCircuit validate(const CircuitDescription& c) {
    ValidatedCircuit v;
    std::vector<int> counts;
    for (std::size_t i = 0; i < c.components.size(); ++i) {
        v.index_of.emplace(c.components[i].name, i);
        counts.push_back(port_count(c.components[i].spec));
    }
    v.port_map = PortMap::sequential(counts);

    auto resolve = [&](const PortRef& ref, int line, std::string_view what) {
        auto it = v.index_of.find(ref.instance);
        if (it == v.index_of.end())
            throw ValidationError("line " + std::to_string(line) + ": " + std::string(what) + " references unknown instance '" +
                                  ref.instance + "'");
        const int n = counts[it->second];
        if (ref.port > n)
            throw ValidationError("line " + std::to_string(line) + ": " + std::string(what) + " " + ref.str() + ": instance '" +
                                  ref.instance + "' has only " + std::to_string(n) + " ports");
        return v.port_map.global_port(it->second, ref.port);
    };

    for (const auto& conn : c.connections) {
        const int a = resolve(conn.a, conn.line, "connect");
        const int b = resolve(conn.b, conn.line, "connect");
        const std::string where = "line " + std::to_string(conn.line) + ": connect " + conn.a.str() + " " + conn.b.str();
        if (a == b) throw ValidationError(where + ": port connected to itself");
        for (auto [p, ref] : {std::pair{a, conn.a}, {b, conn.b}})
            if (v.connections.is_connected(p)) throw ValidationError(where + ": port " + ref.str() + " is already connected");
        v.connections.connect(a, b);
    }

    std::set<int> attached;
    for (const auto& s : c.sources) {
        const int p = resolve(s.port, s.line, "source");
        if (v.connections.is_connected(p))
            throw ValidationError("line " + std::to_string(s.line) + ": source on connected port " + s.port.str());
        attached.insert(p);
        const double power = std::norm(s.pol[0]) + std::norm(s.pol[1]);
        if (std::abs(power - 1.0) > 0.01)
            v.warnings.push_back("source " + s.port.str() + ": launch power |E|^2 = " + std::to_string(power) + " (not 1)");
    }
    for (const auto& d : c.detectors) attached.insert(resolve(d.port, d.line, "detect"));

    for (std::size_t i = 0; i < c.components.size(); ++i)
        for (int lp = 1; lp <= counts[i]; ++lp) {
            const int g = v.port_map.global_port(i, lp);
            if (!v.connections.is_connected(g) && !attached.count(g))
                v.warnings.push_back("port " + c.components[i].name + "." + std::to_string(lp) +
                                     " is unterminated (open, reflectionless exit)");
        }
    return v;
}

/// Shortest round-trip decimal form with a compact exponent (1.55e-6, not 1.55e-06).
inline std::string format_real(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = false;
    if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
        neg = exp[0] == '-';
        exp.erase(0, 1);
    }
    const auto nz = exp.find_first_not_of('0');
    exp = nz == std::string::npos ? "0" : exp.substr(nz);
    return mant + "e" + (neg ? "-" : "") + exp;
}

inline std::string format_complex(complex z) {
    if (z.imag() == 0.0) return format_real(z.real());
    return format_real(z.real()) + "," + format_real(z.imag());
}

/// Canonical text form; parse_netlist(serialize(c)) == c.
inline std::string serialize(const CircuitDescription& c) {
    std::ostringstream out;
    out << "# photonet netlist\n";
    for (const auto& inst : c.components) {
        out << "component " << inst.name << ' ' << type_name(inst.spec);
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Waveguide>)
                    out << " n=" << format_real(s.index_n) << " length=" << format_real(s.length_z)
                        << " dn=" << format_real(s.birefringence_dn) << " angle=" << format_real(s.axis_angle)
                        << " alpha=" << format_real(s.amplitude_loss_alpha) << " phi=" << format_real(s.extra_phase_phi);
                else if constexpr (std::is_same_v<T, Coupler>)
                    out << " kappa=" << format_real(s.power_coupling_kappa) << " loss=" << format_real(s.excess_amplitude_loss);
                else if constexpr (std::is_same_v<T, Mirror>)
                    out << " r=" << format_complex(s.amplitude_reflectance_r);
                else if constexpr (std::is_same_v<T, Rotator>)
                    out << " theta=" << format_real(s.angle_theta);
                else if constexpr (std::is_same_v<T, Retarder>)
                    out << " delta=" << format_real(s.retardance_delta) << " angle=" << format_real(s.axis_angle);
                else if constexpr (std::is_same_v<T, Polarizer>)
                    out << " angle=" << format_real(s.axis_angle) << " extinction=" << format_real(s.extinction_amplitude);
                else if constexpr (std::is_same_v<T, Splice>)
                    out << " t=" << format_real(s.amplitude_transmission) << " theta=" << format_real(s.rotation_angle)
                        << " refl=" << format_complex(s.backreflection_amplitude);
            },
            inst.spec);
        out << '\n';
    }
    for (const auto& conn : c.connections) out << "connect " << conn.a.str() << ' ' << conn.b.str() << '\n';
    for (const auto& s : c.sources)
        out << "source " << s.port.str() << " pol=" << format_real(s.pol[0].real()) << ',' << format_real(s.pol[0].imag())
            << ',' << format_real(s.pol[1].real()) << ',' << format_real(s.pol[1].imag()) << '\n';
    for (const auto& d : c.detectors) out << "detect " << d.port.str() << '\n';
    if (c.sweep) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, WavelengthSweep>)
                    out << "sweep wavelength " << format_real(s.start) << ' ' << format_real(s.stop) << ' ' << s.points << '\n';
                else if constexpr (std::is_same_v<T, FrequencySweep>)
                    out << "sweep frequency " << format_real(s.start) << ' ' << format_real(s.stop) << ' ' << s.points << '\n';
                else
                    out << "sweep single " << format_real(s.wavelength) << '\n';
            },
            *c.sweep);
    }
    return out.str();
}

}  // namespace photonet
