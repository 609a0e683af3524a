#pragma once

#include "dptda/diagram.hpp"
#include "dptda/filtration.hpp"

namespace dptda {

// Persistence pairing over Z/2 via column reduction with the twist/clearing
// optimization; dimensions 0..ell. Classes alive at the cap are reported with
// death = +infinity. Zero-persistence pairs (birth == death) are omitted.
// Throws std::invalid_argument on a non-monotone filtration.
DiagramTuple compute_persistence(const Filtration& filtration, int ell);

// Elder-rule union-find fast path for dimension 0. Produces the same multiset
// as compute_persistence's dim-0 diagram.
Diagram h0_union_find(const Filtration& filtration);

}  // namespace dptda
