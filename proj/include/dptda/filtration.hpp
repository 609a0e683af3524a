#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dptda/dtm.hpp"
#include "dptda/geometry.hpp"

namespace dptda {

enum class FiltrationKind { rips, cech, cubical };

// Ordered cell complex with monotone filtration values. Cells are sorted by
// (value, dimension, id); boundaries reference positions in that order, so
// every facet precedes its cofaces.
class Filtration {
public:
    struct Cell {
        std::int64_t id;
        int dim;
        double value;
    };

    FiltrationKind kind() const { return kind_; }
    std::size_t size() const { return cells_.size(); }
    const Cell& cell(std::size_t pos) const { return cells_[pos]; }
    std::span<const std::size_t> facets(std::size_t pos) const {
        return {boundary_.data() + boundary_offsets_[pos],
                boundary_offsets_[pos + 1] - boundary_offsets_[pos]};
    }
    int max_dim() const;
    double max_value() const;  // filtration cap; 0 for an empty complex

    // True when every cell value >= max over its facet values (exact).
    bool monotone() const;

private:
    friend class FiltrationBuilder;
    FiltrationKind kind_ = FiltrationKind::rips;
    std::vector<Cell> cells_;
    std::vector<std::size_t> boundary_offsets_;
    std::vector<std::size_t> boundary_;
};

// Accumulates cells in any order, then sorts and wires boundaries by id.
class FiltrationBuilder {
public:
    explicit FiltrationBuilder(FiltrationKind kind) : kind_(kind) {}

    void add_cell(std::int64_t id, int dim, double value, std::span<const std::int64_t> facet_ids);
    void reserve(std::size_t cells);

    // Sorts, resolves facet ids, and verifies monotonicity. Throws
    // std::invalid_argument on duplicate/unknown ids or a non-monotone input.
    Filtration finish() &&;

private:
    FiltrationKind kind_;
    struct Pending {
        std::int64_t id;
        int dim;
        double value;
        std::size_t facet_begin, facet_end;
    };
    std::vector<Pending> pending_;
    std::vector<std::int64_t> facet_ids_;
};

// Vietoris-Rips filtration under the radius convention: vertices at 0, edge
// {x,y} at |x-y|/2, triangles at the max of their edges. Cells with value
// beyond max_scale are omitted. max_dim <= 2.
Filtration rips_filtration(const PointCloud& cloud, double max_scale, int max_dim);

// Simplex sets at one scale, as sorted vertex lists (for nesting checks).
// Cech membership: minimal enclosing ball radius <= r (closed balls).
// Rips membership: all pairwise distances <= 2r.
std::vector<std::vector<std::size_t>> cech_complex(const PointCloud& cloud, double r,
                                                   int max_dim);
std::vector<std::vector<std::size_t>> rips_complex(const PointCloud& cloud, double r,
                                                   int max_dim);

// Exact minimal enclosing ball radius of <= 3 points (closed-form cases).
double min_enclosing_radius(const PointCloud& cloud, std::span<const std::size_t> vertices);

// Cubical complex on the field's lattice (V-construction): lattice points are
// 0-cells carrying the field value, higher cubes take the max over their
// vertices. Monotone by construction.
Filtration lower_star_filtration(const ScalarField& field);

}  // namespace dptda
