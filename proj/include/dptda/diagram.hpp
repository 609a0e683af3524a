#pragma once

#include <limits>
#include <vector>

namespace dptda {

inline constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

struct PersistencePair {
    double birth = 0.0;
    double death = kInfiniteDeath;

    double persistence() const { return death - birth; }
    bool essential() const { return death == kInfiniteDeath; }
};

// Multiset of birth-death pairs for one homology dimension.
struct Diagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;

    void validate() const;
};

// Diagrams for dimensions 0..ell, consecutively.
struct DiagramTuple {
    std::vector<Diagram> diagrams;

    int ell() const { return static_cast<int>(diagrams.size()) - 1; }
    void validate() const;
};

DiagramTuple make_empty_tuple(int ell);

// Replaces infinite deaths by `cap`.
Diagram cap_deaths(const Diagram& diagram, double cap);

// Removes the lowest-birth infinite pair from a dim-0 diagram: the essential
// class every nonempty filtration carries (born at 0 for Rips/Cech, at the
// field minimum for sublevel filtrations). A data-independent normalization;
// other essential classes are left in place (the bottleneck caps them).
Diagram drop_h0_essential(const Diagram& diagram);
DiagramTuple drop_h0_essential(const DiagramTuple& tuple);

// Canonical sort by (birth, death) for multiset comparisons.
std::vector<PersistencePair> sorted_pairs(const Diagram& diagram);

}  // namespace dptda
