#include "dptda/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace dptda {

int Filtration::max_dim() const {
    int d = -1;
    for (const auto& c : cells_) d = std::max(d, c.dim);
    return d;
}

double Filtration::max_value() const {
    return cells_.empty() ? 0.0 : cells_.back().value;
}

bool Filtration::monotone() const {
    for (std::size_t pos = 0; pos < cells_.size(); ++pos)
        for (const std::size_t f : facets(pos))
            if (cells_[f].value > cells_[pos].value) return false;
    return true;
}

void FiltrationBuilder::reserve(std::size_t cells) {
    pending_.reserve(cells);
}

void FiltrationBuilder::add_cell(std::int64_t id, int dim, double value,
                                 std::span<const std::int64_t> facet_ids) {
    Pending cell{id, dim, value, facet_ids_.size(), facet_ids_.size() + facet_ids.size()};
    facet_ids_.insert(facet_ids_.end(), facet_ids.begin(), facet_ids.end());
    pending_.push_back(cell);
}

Filtration FiltrationBuilder::finish() && {
    std::sort(pending_.begin(), pending_.end(), [](const Pending& a, const Pending& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.id < b.id;
    });

    std::unordered_map<std::int64_t, std::size_t> position;
    position.reserve(pending_.size() * 2);
    for (std::size_t pos = 0; pos < pending_.size(); ++pos) {
        if (!position.emplace(pending_[pos].id, pos).second)
            throw std::invalid_argument("filtration: duplicate cell id");
    }

    Filtration out;
    out.kind_ = kind_;
    out.cells_.reserve(pending_.size());
    out.boundary_offsets_.reserve(pending_.size() + 1);
    out.boundary_offsets_.push_back(0);
    out.boundary_.reserve(facet_ids_.size());
    for (std::size_t pos = 0; pos < pending_.size(); ++pos) {
        const auto& cell = pending_[pos];
        out.cells_.push_back({cell.id, cell.dim, cell.value});
        for (std::size_t f = cell.facet_begin; f < cell.facet_end; ++f) {
            const auto it = position.find(facet_ids_[f]);
            if (it == position.end())
                throw std::invalid_argument("filtration: unknown facet id");
            const std::size_t facet_pos = it->second;
            if (pending_[facet_pos].value > cell.value)
                throw std::invalid_argument("filtration: non-monotone boundary value");
            if (facet_pos >= pos)
                throw std::invalid_argument("filtration: facet does not precede cell");
            out.boundary_.push_back(facet_pos);
        }
        out.boundary_offsets_.push_back(out.boundary_.size());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rips

Filtration rips_filtration(const PointCloud& cloud, double max_scale, int max_dim) {
    if (cloud.empty()) throw std::invalid_argument("rips: empty cloud");
    if (!(max_scale > 0.0)) throw std::invalid_argument("rips: max_scale must be positive");
    if (max_dim < 0 || max_dim > 2)
        throw std::invalid_argument("rips: unsupported max_dim (0, 1, or 2)");

    const std::int64_t n = static_cast<std::int64_t>(cloud.size());
    const auto edge_id = [n](std::int64_t i, std::int64_t j) { return n + i * n + j; };
    const auto tri_id = [n](std::int64_t i, std::int64_t j, std::int64_t k) {
        return n + n * n + (i * n + j) * n + k;
    };

    FiltrationBuilder builder(FiltrationKind::rips);
    for (std::int64_t i = 0; i < n; ++i) builder.add_cell(i, 0, 0.0, {});

    if (max_dim >= 1) {
        // Halved distances; kept only when a triangle pass needs random access.
        std::vector<double> half;
        const bool keep_matrix = max_dim == 2;
        if (keep_matrix) half.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            for (std::int64_t j = i + 1; j < n; ++j) {
                const double value =
                    distance(cloud.point(static_cast<std::size_t>(i)),
                             cloud.point(static_cast<std::size_t>(j))) / 2.0;
                if (keep_matrix) {
                    half[static_cast<std::size_t>(i * n + j)] = value;
                    half[static_cast<std::size_t>(j * n + i)] = value;
                }
                if (value > max_scale) continue;
                const std::int64_t facets[2] = {i, j};
                builder.add_cell(edge_id(i, j), 1, value, facets);
            }
        }
        if (max_dim == 2) {
            for (std::int64_t i = 0; i < n; ++i) {
                for (std::int64_t j = i + 1; j < n; ++j) {
                    const double vij = half[static_cast<std::size_t>(i * n + j)];
                    if (vij > max_scale) continue;
                    for (std::int64_t k = j + 1; k < n; ++k) {
                        const double vik = half[static_cast<std::size_t>(i * n + k)];
                        const double vjk = half[static_cast<std::size_t>(j * n + k)];
                        const double value = std::max({vij, vik, vjk});
                        if (value > max_scale) continue;
                        const std::int64_t facets[3] = {edge_id(i, j), edge_id(i, k),
                                                        edge_id(j, k)};
                        builder.add_cell(tri_id(i, j, k), 2, value, facets);
                    }
                }
            }
        }
    }
    return std::move(builder).finish();
}

// ---------------------------------------------------------------------------
// Cech / Rips complexes at one scale

double min_enclosing_radius(const PointCloud& cloud, std::span<const std::size_t> vertices) {
    if (vertices.empty() || vertices.size() > 3)
        throw std::invalid_argument("min_enclosing_radius: need 1..3 vertices");
    if (vertices.size() == 1) return 0.0;
    if (vertices.size() == 2)
        return distance(cloud.point(vertices[0]), cloud.point(vertices[1])) / 2.0;

    const auto a = cloud.point(vertices[0]);
    const auto b = cloud.point(vertices[1]);
    const auto c = cloud.point(vertices[2]);
    const std::size_t d = a.size();

    // Candidate 1..3: diametral ball of each pair, grown to reach the third
    // point if needed. Exact when the triangle is right or obtuse.
    double best = std::numeric_limits<double>::infinity();
    const std::span<const double> pts[3] = {a, b, c};
    std::vector<double> mid(d);
    for (int u = 0; u < 3; ++u) {
        const auto p = pts[u];
        const auto q = pts[(u + 1) % 3];
        const auto w = pts[(u + 2) % 3];
        for (std::size_t axis = 0; axis < d; ++axis) mid[axis] = (p[axis] + q[axis]) / 2.0;
        const double r = distance(p, q) / 2.0;
        const double reach = distance(w, mid);
        best = std::min(best, std::max(r, reach));
    }

    // Candidate 4: circumball (exact for acute triangles). Gram determinant
    // form works in any ambient dimension.
    std::vector<double> u_vec(d), v_vec(d);
    for (std::size_t axis = 0; axis < d; ++axis) {
        u_vec[axis] = b[axis] - a[axis];
        v_vec[axis] = c[axis] - a[axis];
    }
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t axis = 0; axis < d; ++axis) {
        uu += u_vec[axis] * u_vec[axis];
        vv += v_vec[axis] * v_vec[axis];
        uv += u_vec[axis] * v_vec[axis];
    }
    const double gram = uu * vv - uv * uv;
    if (gram > 0.0) {
        const double bc = distance(b, c);
        const double circum = std::sqrt(uu) * std::sqrt(vv) * bc / (2.0 * std::sqrt(gram));
        best = std::min(best, circum);
    }
    return best;
}

namespace {

std::vector<std::vector<std::size_t>> complex_at_scale(const PointCloud& cloud, double r,
                                                       int max_dim, bool cech) {
    if (cloud.empty()) throw std::invalid_argument("complex: empty cloud");
    if (cloud.size() > 32)
        throw std::invalid_argument("complex: combinatorial enumeration limited to n <= 32");
    if (max_dim < 0 || max_dim > 2)
        throw std::invalid_argument("complex: unsupported max_dim (0, 1, or 2)");
    if (r < 0.0) throw std::invalid_argument("complex: negative radius");

    const std::size_t n = cloud.size();
    std::vector<std::vector<std::size_t>> simplices;
    for (std::size_t i = 0; i < n; ++i) simplices.push_back({i});

    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    if (max_dim >= 1) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (distance(cloud.point(i), cloud.point(j)) / 2.0 <= r) {
                    edge[i][j] = true;
                    simplices.push_back({i, j});
                }
    }
    if (max_dim == 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!edge[i][j]) continue;
                for (std::size_t k = j + 1; k < n; ++k) {
                    if (!edge[i][k] || !edge[j][k]) continue;
                    if (cech) {
                        const std::size_t verts[3] = {i, j, k};
                        if (min_enclosing_radius(cloud, verts) > r) continue;
                    }
                    simplices.push_back({i, j, k});
                }
            }
    }
    std::sort(simplices.begin(), simplices.end());
    return simplices;
}

}  // namespace

std::vector<std::vector<std::size_t>> cech_complex(const PointCloud& cloud, double r,
                                                   int max_dim) {
    return complex_at_scale(cloud, r, max_dim, true);
}

std::vector<std::vector<std::size_t>> rips_complex(const PointCloud& cloud, double r,
                                                   int max_dim) {
    return complex_at_scale(cloud, r, max_dim, false);
}

// ---------------------------------------------------------------------------
// Cubical lower-star
//
// Mixed-coordinate scheme: along axis a the lattice of G_a vertices induces
// 2*G_a - 1 slots; even slots are vertices, odd slots are unit intervals. A
// cube is a choice of slot per axis, its dimension the number of odd slots,
// its value the max over its corner vertices, and its facets the two cubes
// obtained by replacing one odd slot with its even endpoints.

Filtration lower_star_filtration(const ScalarField& field) {
    const GridSpec& grid = field.grid;
    grid.validate();
    if (field.values.size() != grid.point_count())
        throw std::invalid_argument("lower_star: field size does not match grid");
    for (const double v : field.values)
        if (!std::isfinite(v)) throw std::invalid_argument("lower_star: non-finite field value");

    const std::size_t d = grid.dim();
    std::vector<std::size_t> mixed_size(d), mixed_stride(d), grid_stride(d);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        mixed_size[a] = 2 * grid.resolution[a] - 1;
        mixed_stride[a] = total;
        total *= mixed_size[a];
    }
    {
        std::size_t s = 1;
        for (std::size_t a = 0; a < d; ++a) {
            grid_stride[a] = s;
            s *= grid.resolution[a];
        }
    }

    FiltrationBuilder builder(FiltrationKind::cubical);
    builder.reserve(total);

    std::vector<std::size_t> coord(d);
    std::vector<std::size_t> odd_axes;
    std::vector<std::int64_t> facets;
    for (std::size_t linear = 0; linear < total; ++linear) {
        std::size_t rest = linear;
        odd_axes.clear();
        std::size_t base_vertex = 0;  // grid index using lower endpoints
        for (std::size_t a = 0; a < d; ++a) {
            coord[a] = rest % mixed_size[a];
            rest /= mixed_size[a];
            if (coord[a] % 2 == 1)
                odd_axes.push_back(a);
            base_vertex += (coord[a] / 2) * grid_stride[a];
        }
        const int dim = static_cast<int>(odd_axes.size());

        // Max over the 2^dim corners.
        double value = -std::numeric_limits<double>::infinity();
        for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
            std::size_t vertex = base_vertex;
            for (int bit = 0; bit < dim; ++bit)
                if (mask & (std::size_t{1} << bit)) vertex += grid_stride[odd_axes[bit]];
            value = std::max(value, field.values[vertex]);
        }

        facets.clear();
        for (const std::size_t a : odd_axes) {
            facets.push_back(static_cast<std::int64_t>(linear - mixed_stride[a]));
            facets.push_back(static_cast<std::int64_t>(linear + mixed_stride[a]));
        }
        builder.add_cell(static_cast<std::int64_t>(linear), dim, value, facets);
    }
    return std::move(builder).finish();
}

}  // namespace dptda
