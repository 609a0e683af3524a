#include "dptda/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace dptda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
    double birth;
    double death;
    std::size_t original;  // index into the caller's diagram

    double diagonal_gap() const { return (death - birth) / 2.0; }
};

double linf(const Point& a, const Point& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

// Splits a diagram into finite points (infinite deaths capped when cap is
// finite) and the essential remainder. Zero-persistence points are dropped;
// they sit on the diagonal and never affect the distance.
void split_diagram(const Diagram& diagram, double cap, std::vector<Point>& finite,
                   std::vector<Point>& essential) {
    for (std::size_t i = 0; i < diagram.pairs.size(); ++i) {
        const auto& pair = diagram.pairs[i];
        if (pair.essential() && cap == kInf) {
            essential.push_back({pair.birth, pair.death, i});
            continue;
        }
        const double death = pair.essential() ? cap : pair.death;
        if (death != pair.birth) finite.push_back({pair.birth, death, i});
    }
}

// Hopcroft-Karp maximum matching on an adjacency list (left -> right).
class MaxMatcher {
public:
    MaxMatcher(std::size_t left, std::size_t right, std::vector<std::vector<std::size_t>> adj)
        : left_(left), right_(right), adj_(std::move(adj)) {}

    std::size_t solve() {
        match_left_.assign(left_, kNone);
        match_right_.assign(right_, kNone);
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < left_; ++u)
                if (match_left_[u] == kNone && dfs(u)) ++matched;
        }
        return matched;
    }

    const std::vector<std::size_t>& left_matches() const { return match_left_; }

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

private:
    bool bfs() {
        std::queue<std::size_t> frontier;
        dist_.assign(left_, kNone);
        for (std::size_t u = 0; u < left_; ++u) {
            if (match_left_[u] == kNone) {
                dist_[u] = 0;
                frontier.push(u);
            }
        }
        bool reachable = false;
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (const std::size_t v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == kNone) {
                    reachable = true;
                } else if (dist_[w] == kNone) {
                    dist_[w] = dist_[u] + 1;
                    frontier.push(w);
                }
            }
        }
        return reachable;
    }

    bool dfs(std::size_t u) {
        for (const std::size_t v : adj_[u]) {
            const std::size_t w = match_right_[v];
            if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        dist_[u] = kNone;
        return false;
    }

    std::size_t left_, right_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_left_, match_right_, dist_;
};

// Feasibility at cost c. Points with diagonal gap <= c may retire to the
// diagonal; the rest are mandatory and must cross-match within l-inf c
// (possibly to an optional point of the other side). By Mendelsohn-Dulmage, a
// single matching covering both mandatory sets exists iff one exists for each
// side separately, so two one-sided Hopcroft-Karp runs decide feasibility.
bool test_cost(const std::vector<Point>& p, const std::vector<Point>& q, double c) {
    std::vector<std::size_t> mand_p, mand_q;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].diagonal_gap() > c) mand_p.push_back(i);
    for (std::size_t j = 0; j < q.size(); ++j)
        if (q[j].diagonal_gap() > c) mand_q.push_back(j);
    if (mand_p.size() > q.size() || mand_q.size() > p.size()) return false;

    if (!mand_p.empty()) {
        std::vector<std::vector<std::size_t>> adj(mand_p.size());
        for (std::size_t u = 0; u < mand_p.size(); ++u)
            for (std::size_t v = 0; v < q.size(); ++v)
                if (linf(p[mand_p[u]], q[v]) <= c) adj[u].push_back(v);
        MaxMatcher matcher(mand_p.size(), q.size(), std::move(adj));
        if (matcher.solve() != mand_p.size()) return false;
    }
    if (!mand_q.empty()) {
        std::vector<std::vector<std::size_t>> adj(mand_q.size());
        for (std::size_t u = 0; u < mand_q.size(); ++u)
            for (std::size_t v = 0; v < p.size(); ++v)
                if (linf(p[v], q[mand_q[u]]) <= c) adj[u].push_back(v);
        MaxMatcher matcher(mand_q.size(), p.size(), std::move(adj));
        if (matcher.solve() != mand_q.size()) return false;
    }
    return true;
}

// Witness at a known-feasible cost: perfect matching on the diagonal-augmented
// diagrams. Left nodes are P points then one diagonal slot per Q point; right
// nodes are Q points then one slot per P point. Point-to-diagonal edges use
// the point's own slot (slots are interchangeable, so this loses nothing).
std::vector<MatchEdge> build_witness(const std::vector<Point>& p, const std::vector<Point>& q,
                                     double c) {
    const std::size_t np = p.size(), nq = q.size();
    std::vector<std::vector<std::size_t>> adj(np + nq);
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nq; ++j)
            if (linf(p[i], q[j]) <= c) adj[i].push_back(j);
        if (p[i].diagonal_gap() <= c) adj[i].push_back(nq + i);  // own diagonal slot
    }
    for (std::size_t j = 0; j < nq; ++j) {
        auto& slots = adj[np + j];
        if (q[j].diagonal_gap() <= c) slots.push_back(j);
        for (std::size_t i = 0; i < np; ++i) slots.push_back(nq + i);  // diag-diag, free
    }
    MaxMatcher matcher(np + nq, nq + np, std::move(adj));
    matcher.solve();
    const auto& match = matcher.left_matches();

    std::vector<MatchEdge> edges;
    for (std::size_t i = 0; i < np; ++i) {
        const std::size_t v = match[i];
        if (v < nq)
            edges.push_back({static_cast<std::ptrdiff_t>(p[i].original),
                             static_cast<std::ptrdiff_t>(q[v].original)});
        else
            edges.push_back({static_cast<std::ptrdiff_t>(p[i].original), -1});
    }
    for (std::size_t j = 0; j < nq; ++j) {
        const std::size_t v = match[np + j];
        if (v < nq)  // slot matched to its own point: this Q point is on the diagonal
            edges.push_back({-1, static_cast<std::ptrdiff_t>(q[j].original)});
    }
    return edges;
}

MatchResult finite_bottleneck(const std::vector<Point>& p, const std::vector<Point>& q) {
    MatchResult result;
    if (p.empty() && q.empty()) return result;

    std::vector<double> candidates{0.0};
    for (const auto& a : p) candidates.push_back(a.diagonal_gap());
    for (const auto& b : q) candidates.push_back(b.diagonal_gap());
    for (const auto& a : p)
        for (const auto& b : q) candidates.push_back(linf(a, b));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Smallest feasible candidate; the largest is always feasible (it clears
    // every diagonal gap).
    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!test_cost(p, q, candidates[0])) {
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (test_cost(p, q, candidates[mid]))
                hi = mid;
            else
                lo = mid;
        }
    } else {
        hi = 0;
    }

    result.distance = candidates[hi];
    result.matching = build_witness(p, q, result.distance);
    return result;
}

}  // namespace

MatchResult bottleneck(const Diagram& p, const Diagram& q, double cap) {
    p.validate();
    q.validate();
    std::vector<Point> pf, qf, pe, qe;
    split_diagram(p, cap, pf, pe);
    split_diagram(q, cap, qf, qe);

    MatchResult result;
    double essential_cost = 0.0;
    if (pe.size() != qe.size()) {
        // No bijection can pair an uncapped essential point off the diagonal.
        result.distance = kInf;
        return result;
    }
    if (!pe.empty()) {
        // Optimal 1-d matching of the essential births: sort and pair in order.
        auto by_birth = [](const Point& a, const Point& b) { return a.birth < b.birth; };
        std::sort(pe.begin(), pe.end(), by_birth);
        std::sort(qe.begin(), qe.end(), by_birth);
        for (std::size_t i = 0; i < pe.size(); ++i) {
            essential_cost = std::max(essential_cost, std::abs(pe[i].birth - qe[i].birth));
            result.matching.push_back({static_cast<std::ptrdiff_t>(pe[i].original),
                                       static_cast<std::ptrdiff_t>(qe[i].original)});
        }
    }

    MatchResult finite = finite_bottleneck(pf, qf);
    result.distance = std::max(finite.distance, essential_cost);
    result.matching.insert(result.matching.end(), finite.matching.begin(),
                           finite.matching.end());
    return result;
}

double bottleneck_bruteforce(const Diagram& p, const Diagram& q, double cap) {
    p.validate();
    q.validate();
    std::vector<Point> pf, qf, pe, qe;
    split_diagram(p, cap, pf, pe);
    split_diagram(q, cap, qf, qe);
    if (pf.size() > 7 || qf.size() > 7)
        throw std::invalid_argument("bottleneck_bruteforce: more than 7 points per side");
    if (pe.size() != qe.size()) return kInf;
    double essential_cost = 0.0;
    auto by_birth = [](const Point& a, const Point& b) { return a.birth < b.birth; };
    std::sort(pe.begin(), pe.end(), by_birth);
    std::sort(qe.begin(), qe.end(), by_birth);
    for (std::size_t i = 0; i < pe.size(); ++i)
        essential_cost = std::max(essential_cost, std::abs(pe[i].birth - qe[i].birth));

    // Depth-first over all assignments of P points to unused Q points or the
    // diagonal; unused Q points then pay their own diagonal gap.
    double best = kInf;
    std::vector<char> used(qf.size(), 0);
    const auto recurse = [&](auto&& self, std::size_t i, double current) -> void {
        if (current >= best) return;
        if (i == pf.size()) {
            double total = current;
            for (std::size_t j = 0; j < qf.size(); ++j)
                if (!used[j]) total = std::max(total, qf[j].diagonal_gap());
            best = std::min(best, total);
            return;
        }
        for (std::size_t j = 0; j < qf.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            self(self, i + 1, std::max(current, linf(pf[i], qf[j])));
            used[j] = 0;
        }
        self(self, i + 1, std::max(current, pf[i].diagonal_gap()));
    };
    recurse(recurse, 0, essential_cost);
    return best;
}

double tuple_bottleneck(const DiagramTuple& p, const DiagramTuple& q, double cap,
                        std::vector<double>& per_dim) {
    if (p.ell() != q.ell())
        throw std::invalid_argument("tuple_bottleneck: ell mismatch");
    per_dim.assign(p.diagrams.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < p.diagrams.size(); ++i) {
        per_dim[i] = bottleneck(p.diagrams[i], q.diagrams[i], cap).distance;
        total += per_dim[i];
    }
    return total;
}

double tuple_bottleneck(const DiagramTuple& p, const DiagramTuple& q, double cap) {
    std::vector<double> per_dim;
    return tuple_bottleneck(p, q, cap, per_dim);
}

// ---------------------------------------------------------------------------
// Assignment-based empirical Wasserstein
//
// Shortest-augmenting-path assignment with potentials (Jonker-Volgenant
// flavour), O(n^3). Costs are ||a_i - b_j||^p.

double wasserstein_p_empirical(const PointCloud& a, const PointCloud& b, double p) {
    if (a.size() != b.size())
        throw std::invalid_argument("wasserstein: cardinality mismatch");
    if (a.dim() != b.dim()) throw std::invalid_argument("wasserstein: dimension mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("wasserstein: p must be >= 1");
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("wasserstein: empty clouds");

    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dist = distance(a.point(i), b.point(j));
            cost[i * n + j] = p == 1.0 ? dist : (p == 2.0 ? dist * dist : std::pow(dist, p));
        }

    // 1-based arrays, row potentials u, column potentials v.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // column -> row
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        std::vector<std::size_t> way(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double reduced = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[(match[j] - 1) * n + (j - 1)];
    const double mean = total / static_cast<double>(n);
    return p == 1.0 ? mean : (p == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / p));
}

}  // namespace dptda
