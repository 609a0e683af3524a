#include "dptda/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dptda {

namespace {

// Symmetric difference of two sorted position lists (Z/2 column addition).
void add_column(std::vector<std::size_t>& col, const std::vector<std::size_t>& other,
                std::vector<std::size_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    col.swap(scratch);
}

}  // namespace

DiagramTuple compute_persistence(const Filtration& filtration, int ell) {
    if (ell < 0) throw std::invalid_argument("persistence: ell must be >= 0");
    if (!filtration.monotone())
        throw std::invalid_argument("persistence: filtration violates monotonicity");

    const std::size_t n = filtration.size();
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    std::vector<std::size_t> death_of(n, kNone);  // birth cell -> death cell
    std::vector<char> paired(n, 0);               // birth cells paired via a pivot
    std::vector<char> born_zero(n, 0);            // column reduced to zero
    std::vector<std::size_t> pivot_owner(n, kNone);
    std::vector<std::vector<std::size_t>> columns(n);

    // Positions grouped by dimension, already in filtration order.
    const int top = std::min(ell + 1, filtration.max_dim());
    std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(top) + 1);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const int d = filtration.cell(pos).dim;
        if (d <= top) by_dim[static_cast<std::size_t>(d)].push_back(pos);
    }

    // Reduce from the top dimension down; pivots found in dimension q+1 clear
    // the corresponding dim-q columns (they are guaranteed cycles).
    std::vector<std::size_t> scratch;
    for (int q = top; q >= 1; --q) {
        for (const std::size_t j : by_dim[static_cast<std::size_t>(q)]) {
            if (paired[j]) continue;  // cleared by the pass one dimension up
            auto facets = filtration.facets(j);
            std::vector<std::size_t> col(facets.begin(), facets.end());
            std::sort(col.begin(), col.end());
            while (!col.empty()) {
                const std::size_t pivot = col.back();
                const std::size_t owner = pivot_owner[pivot];
                if (owner == kNone) break;
                add_column(col, columns[owner], scratch);
            }
            if (col.empty()) {
                born_zero[j] = 1;
            } else {
                const std::size_t pivot = col.back();
                pivot_owner[pivot] = j;
                death_of[pivot] = j;
                paired[pivot] = 1;
                columns[j] = std::move(col);
            }
        }
    }

    DiagramTuple tuple = make_empty_tuple(ell);
    for (int q = 0; q <= std::min(ell, filtration.max_dim()); ++q) {
        auto& diagram = tuple.diagrams[static_cast<std::size_t>(q)];
        for (const std::size_t j : by_dim[static_cast<std::size_t>(q)]) {
            const double birth = filtration.cell(j).value;
            if (paired[j]) {
                const double death = filtration.cell(death_of[j]).value;
                if (death != birth) diagram.pairs.push_back({birth, death});
            } else if (q == 0 || born_zero[j]) {
                diagram.pairs.push_back({birth, kInfiniteDeath});
            }
        }
    }
    return tuple;
}

Diagram h0_union_find(const Filtration& filtration) {
    if (!filtration.monotone())
        throw std::invalid_argument("persistence: filtration violates monotonicity");

    const std::size_t n = filtration.size();
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n, kNone);
    std::vector<std::size_t> rank(n, 0);
    std::vector<double> root_birth(n, 0.0);

    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    Diagram diagram{0, {}};
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto& cell = filtration.cell(pos);
        if (cell.dim == 0) {
            parent[pos] = pos;
            root_birth[pos] = cell.value;
        } else if (cell.dim == 1) {
            const auto facets = filtration.facets(pos);
            std::size_t ru = find(facets[0]);
            std::size_t rv = find(facets[1]);
            if (ru == rv) continue;  // cycle edge
            // Elder rule: the younger component dies at this edge.
            if (root_birth[ru] < root_birth[rv]) std::swap(ru, rv);
            if (cell.value != root_birth[ru])
                diagram.pairs.push_back({root_birth[ru], cell.value});
            const double surviving_birth = root_birth[rv];
            if (rank[ru] > rank[rv]) std::swap(ru, rv);
            parent[ru] = rv;
            if (rank[ru] == rank[rv]) ++rank[rv];
            root_birth[rv] = surviving_birth;
        }
    }
    for (std::size_t pos = 0; pos < n; ++pos)
        if (parent[pos] == pos && filtration.cell(pos).dim == 0)
            diagram.pairs.push_back({root_birth[pos], kInfiniteDeath});
    return diagram;
}

}  // namespace dptda
