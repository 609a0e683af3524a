#include "dptda/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dptda {

void Diagram::validate() const {
    if (dim < 0) throw std::invalid_argument("diagram: negative dimension");
    for (const auto& pair : pairs) {
        if (std::isnan(pair.birth) || std::isnan(pair.death))
            throw std::invalid_argument("diagram: NaN coordinate");
        if (pair.birth > pair.death)
            throw std::invalid_argument("diagram: birth exceeds death");
    }
}

void DiagramTuple::validate() const {
    if (diagrams.empty()) throw std::invalid_argument("diagram tuple: empty");
    for (std::size_t q = 0; q < diagrams.size(); ++q) {
        if (diagrams[q].dim != static_cast<int>(q))
            throw std::invalid_argument("diagram tuple: dimensions not consecutive from 0");
        diagrams[q].validate();
    }
}

DiagramTuple make_empty_tuple(int ell) {
    if (ell < 0) throw std::invalid_argument("diagram tuple: ell must be >= 0");
    DiagramTuple tuple;
    tuple.diagrams.resize(static_cast<std::size_t>(ell) + 1);
    for (int q = 0; q <= ell; ++q) tuple.diagrams[static_cast<std::size_t>(q)].dim = q;
    return tuple;
}

Diagram cap_deaths(const Diagram& diagram, double cap) {
    Diagram out{diagram.dim, {}};
    out.pairs.reserve(diagram.pairs.size());
    for (auto pair : diagram.pairs) {
        if (pair.essential()) pair.death = cap;
        out.pairs.push_back(pair);
    }
    return out;
}

Diagram drop_h0_essential(const Diagram& diagram) {
    Diagram out = diagram;
    if (diagram.dim != 0) return out;
    auto victim = out.pairs.end();
    for (auto it = out.pairs.begin(); it != out.pairs.end(); ++it) {
        if (it->essential() && (victim == out.pairs.end() || it->birth < victim->birth))
            victim = it;
    }
    if (victim != out.pairs.end()) out.pairs.erase(victim);
    return out;
}

DiagramTuple drop_h0_essential(const DiagramTuple& tuple) {
    DiagramTuple out = tuple;
    if (!out.diagrams.empty()) out.diagrams[0] = drop_h0_essential(out.diagrams[0]);
    return out;
}

std::vector<PersistencePair> sorted_pairs(const Diagram& diagram) {
    auto pairs = diagram.pairs;
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return a.birth < b.birth || (a.birth == b.birth && a.death < b.death);
    });
    return pairs;
}

}  // namespace dptda
