#pragma once

// Rectangular 0/1 selectors Â that compact H to ports of interest:
// H' = Â·H·Âᵀ and Ĵ'_kj = Â_k·H·Â_jᵀ.

#include <set>
#include <string>
#include <vector>

#include "photonet/matrix.hpp"
#include "photonet/network.hpp"

namespace photonet {

class ReductionSelector {
public:
    ReductionSelector(std::vector<int> ports, int m) : ports_(std::move(ports)), m_(m) {
        std::set<int> seen;
        for (int p : ports_) {
            if (p < 1 || p > m_) throw TopologyError("selector: port " + std::to_string(p) + " outside 1.." + std::to_string(m_));
            if (!seen.insert(p).second) throw TopologyError("selector: port " + std::to_string(p) + " repeated");
        }
    }

    const std::vector<int>& ports() const noexcept { return ports_; }
    int total_ports() const noexcept { return m_; }
    std::size_t reduced_dim() const noexcept { return 2 * ports_.size(); }

    /// Zero-based full-space coordinate selected by reduced row `row`.
    std::size_t source_coordinate(std::size_t row) const { return port_coordinate(ports_[row / 2]) + row % 2; }

    /// The explicit 2k×2m matrix Â.
    ComplexMatrix matrix() const {
        ComplexMatrix a(reduced_dim(), static_cast<std::size_t>(2 * m_));
        for (std::size_t r = 0; r < reduced_dim(); ++r) a(r, source_coordinate(r)) = 1.0;
        return a;
    }

    /// Âᵀ·E': embed a reduced vector back into the full 2m space.
    ComplexVector embed(const ComplexVector& reduced) const {
        if (reduced.dim() != reduced_dim()) throw DimensionError("selector embed: dimension mismatch");
        ComplexVector full(static_cast<std::size_t>(2 * m_));
        for (std::size_t r = 0; r < reduced_dim(); ++r) full[source_coordinate(r)] = reduced[r];
        return full;
    }

    /// Â·E: restrict a full vector to the retained coordinates.
    ComplexVector restrict(const ComplexVector& full) const {
        if (full.dim() != static_cast<std::size_t>(2 * m_)) throw DimensionError("selector restrict: dimension mismatch");
        ComplexVector out(reduced_dim());
        for (std::size_t r = 0; r < reduced_dim(); ++r) out[r] = full[source_coordinate(r)];
        return out;
    }

private:
    std::vector<int> ports_;
    int m_;
};

inline ReductionSelector selector_for_ports(std::vector<int> ports, int m) { return ReductionSelector(std::move(ports), m); }

/// Â·H·Âᵀ by direct selection; no arithmetic touches the entries.
inline ComplexMatrix reduce_transfer(const ReductionSelector& sel, const ComplexMatrix& h) {
    const auto full = static_cast<std::size_t>(2 * sel.total_ports());
    if (h.rows() != full || h.cols() != full) throw DimensionError("reduce_transfer: H is not 2m x 2m");
    const auto k = sel.reduced_dim();
    ComplexMatrix out(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) out(r, c) = h(sel.source_coordinate(r), sel.source_coordinate(c));
    return out;
}

/// Effective 2×2 Jones matrix from input port j to output port k.
inline ComplexMatrix extract_jones(int k_out, int j_in, const ComplexMatrix& h) {
    if (!h.is_square() || h.rows() % 2 != 0) throw DimensionError("extract_jones: H must be 2m x 2m");
    const int m = static_cast<int>(h.rows() / 2);
    for (int p : {k_out, j_in})
        if (p < 1 || p > m) throw TopologyError("extract_jones: port " + std::to_string(p) + " outside 1.." + std::to_string(m));
    return h.block(port_coordinate(k_out), port_coordinate(j_in), 2, 2);
}

}  // namespace photonet
