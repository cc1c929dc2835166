#pragma once

// Global scattering matrix S, connection matrix G and the amplitude transfer
// function H = (S⁻¹ − G)⁻¹ of an arbitrarily connected network.
//
// Global port p (1-based) owns coordinates 2p−1 (x) and 2p (y), i.e. zero-based
// rows 2(p−1) and 2(p−1)+1.

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "photonet/components.hpp"
#include "photonet/matrix.hpp"

namespace photonet {

class TopologyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::size_t port_coordinate(int port) { return static_cast<std::size_t>(2 * (port - 1)); }

/// Global port numbers for each component's local ports. `assignments[c][i]`
/// is the global port of local port i+1 of component c.
class PortMap {
public:
    PortMap() = default;

    explicit PortMap(std::vector<std::vector<int>> assignments) : assignments_(std::move(assignments)) {
        std::vector<int> all;
        for (const auto& a : assignments_) all.insert(all.end(), a.begin(), a.end());
        total_ports_ = static_cast<int>(all.size());
        std::sort(all.begin(), all.end());
        for (int i = 0; i < total_ports_; ++i) {
            if (all[static_cast<std::size_t>(i)] != i + 1) {
                if (i > 0 && all[static_cast<std::size_t>(i)] == all[static_cast<std::size_t>(i - 1)])
                    throw TopologyError("PortMap: global port " + std::to_string(all[static_cast<std::size_t>(i)]) +
                                        " assigned twice");
                throw TopologyError("PortMap: global ports are not a bijection onto 1..m");
            }
        }
    }

    /// Ports numbered consecutively in component order.
    static PortMap sequential(std::span<const int> port_counts) {
        std::vector<std::vector<int>> a;
        int next = 1;
        for (int n : port_counts) {
            std::vector<int> ports(static_cast<std::size_t>(n));
            for (auto& p : ports) p = next++;
            a.push_back(std::move(ports));
        }
        return PortMap(std::move(a));
    }

    int total_ports() const noexcept { return total_ports_; }
    std::size_t component_count() const noexcept { return assignments_.size(); }
    const std::vector<int>& ports_of(std::size_t component) const { return assignments_.at(component); }
    int global_port(std::size_t component, int local_port) const {
        const auto& p = assignments_.at(component);
        if (local_port < 1 || local_port > static_cast<int>(p.size()))
            throw TopologyError("PortMap: local port " + std::to_string(local_port) + " out of range");
        return p[static_cast<std::size_t>(local_port - 1)];
    }

    friend bool operator==(const PortMap&, const PortMap&) = default;

private:
    std::vector<std::vector<int>> assignments_;
    int total_ports_ = 0;
};

/// Unordered pairs of connected global ports.
class ConnectionMap {
public:
    ConnectionMap() = default;

    void connect(int a, int b) {
        if (a == b) throw TopologyError("connection: port " + std::to_string(a) + " connected to itself");
        for (int p : {a, b})
            if (used_.count(p)) throw TopologyError("connection: port " + std::to_string(p) + " used more than once");
        used_.insert(a);
        used_.insert(b);
        pairs_.emplace_back(std::min(a, b), std::max(a, b));
    }

    const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }
    bool is_connected(int port) const { return used_.count(port) != 0; }
    std::size_t size() const noexcept { return pairs_.size(); }

private:
    std::vector<std::pair<int, int>> pairs_;
    std::set<int> used_;
};

inline ComplexMatrix assemble_global_scattering(std::span<const ScatteringBlock> blocks, const PortMap& port_map) {
    if (blocks.size() != port_map.component_count())
        throw DimensionError("assemble_global_scattering: " + std::to_string(blocks.size()) + " blocks but " +
                             std::to_string(port_map.component_count()) + " components in port map");
    const auto dim = static_cast<std::size_t>(2 * port_map.total_ports());
    ComplexMatrix s(dim, dim);
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        const auto& ports = port_map.ports_of(c);
        if (static_cast<int>(ports.size()) != blocks[c].port_count())
            throw DimensionError("assemble_global_scattering: component " + std::to_string(c) +
                                 " port count does not match its block");
        const auto& m = blocks[c].matrix();
        for (std::size_t i = 0; i < ports.size(); ++i)
            for (std::size_t j = 0; j < ports.size(); ++j) {
                const auto r = port_coordinate(ports[i]);
                const auto q = port_coordinate(ports[j]);
                for (std::size_t u = 0; u < 2; ++u)
                    for (std::size_t v = 0; v < 2; ++v) s(r + u, q + v) = m(2 * i + u, 2 * j + v);
            }
    }
    return s;
}

/// 2m×2m 0/1 matrix routing each connected port's output into its partner's input.
inline ComplexMatrix assemble_connection_matrix(const ConnectionMap& connections, int m) {
    const auto dim = static_cast<std::size_t>(2 * m);
    ComplexMatrix g(dim, dim);
    for (auto [a, b] : connections.pairs()) {
        if (a < 1 || b > m) throw TopologyError("connection references port outside 1.." + std::to_string(m));
        const auto ra = port_coordinate(a), rb = port_coordinate(b);
        for (std::size_t u = 0; u < 2; ++u) {
            g(ra + u, rb + u) = 1.0;
            g(rb + u, ra + u) = 1.0;
        }
    }
    return g;
}

/// Solves (I − S·G)·H = S. Equal to (S⁻¹ − G)⁻¹ whenever S is invertible and
/// still defined when S is singular (polarizers, absorbers).
/// Throws SingularMatrixError when I − S·G is numerically singular.
inline ComplexMatrix solve_transfer(const ComplexMatrix& s, const ComplexMatrix& g, double* condition_out = nullptr) {
    if (!s.is_square() || !g.is_square() || s.rows() != g.rows())
        throw DimensionError("solve_transfer: S and G must be square and of equal size");
    ComplexMatrix system = ComplexMatrix::identity(s.rows()) - s * g;
    LuDecomposition lu(std::move(system));
    const double cond = lu.condition_estimate();
    if (condition_out) *condition_out = cond;
    if (!(cond <= singularity_threshold)) throw SingularMatrixError(cond);
    return lu.solve(s);
}

/// Ĵ_N ⋯ Ĵ₂ Ĵ₁ for a list in propagation order (first element applied first).
inline ComplexMatrix chain_product(std::span<const ComplexMatrix> jones_list) {
    if (jones_list.empty()) throw std::invalid_argument("chain_product: empty list");
    ComplexMatrix acc = jones_list.front();
    for (std::size_t i = 1; i < jones_list.size(); ++i) acc = jones_list[i] * acc;
    return acc;
}

inline ComplexVector propagate(const ComplexMatrix& h, const ComplexVector& e_o) {
    if (h.cols() != e_o.dim()) throw DimensionError("propagate: H and E_o dimensions differ");
    return h * e_o;
}

/// S, G and (once solved) H for one optical frequency.
struct NetworkSystem {
    ComplexMatrix S;
    ComplexMatrix G;
    PortMap port_map;
    std::optional<ComplexMatrix> H;
    double condition = 0.0;

    NetworkSystem(ComplexMatrix s, ComplexMatrix g, PortMap map)
        : S(std::move(s)), G(std::move(g)), port_map(std::move(map)) {
        if (S.rows() != static_cast<std::size_t>(2 * port_map.total_ports()) || S.rows() != G.rows() || !S.is_square() ||
            !G.is_square())
            throw DimensionError("NetworkSystem: S, G and port map sizes disagree");
    }

    static NetworkSystem assemble(std::span<const ScatteringBlock> blocks, const PortMap& map,
                                  const ConnectionMap& connections) {
        return NetworkSystem(assemble_global_scattering(blocks, map),
                             assemble_connection_matrix(connections, map.total_ports()), map);
    }

    int total_ports() const noexcept { return port_map.total_ports(); }

    const ComplexMatrix& solve() {
        H = solve_transfer(S, G, &condition);
        return *H;
    }
};

/// Full 2m launch vector with `pol` placed at global port `port`.
inline ComplexVector launch_vector(int m, int port, complex ex, complex ey) {
    if (port < 1 || port > m) throw TopologyError("launch port outside 1.." + std::to_string(m));
    ComplexVector e(static_cast<std::size_t>(2 * m));
    e[port_coordinate(port)] = ex;
    e[port_coordinate(port) + 1] = ey;
    return e;
}

}  // namespace photonet
