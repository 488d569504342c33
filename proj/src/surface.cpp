#include "gcpack/surface.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gcpack/errors.hpp"

namespace gcp
{

Triangulation::Triangulation(int num_vertices, std::vector<Face> faces)
    : num_vertices_{num_vertices}, faces_{std::move(faces)}
{
    if (num_vertices_ <= 0) {
        throw DomainError("triangulation needs at least one vertex");
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        for (int v : faces_[f]) {
            if (v < 0 || v >= num_vertices_) {
                std::ostringstream msg;
                msg << "face " << f << " references vertex " << v << " outside [0, " << num_vertices_ << ")";
                throw DomainError(msg.str());
            }
        }
    }

    std::map<Edge, std::vector<int>> edge_map;
    std::vector<int> degree(num_vertices_, 0);
    for (int f = 0; f < num_faces(); ++f) {
        const Face& face = faces_[f];
        for (int c = 0; c < 3; ++c) {
            int a = face[c];
            int b = face[(c + 1) % 3];
            if (a == b) {
                continue;
            }
            if (a > b) std::swap(a, b);
            edge_map[{a, b}].push_back(f);
        }
        // count each distinct vertex of the face once
        for (int c = 0; c < 3; ++c) {
            bool seen = false;
            for (int d = 0; d < c; ++d) seen |= face[d] == face[c];
            if (!seen) ++degree[face[c]];
        }
    }
    for (auto& [edge, fs] : edge_map) {
        edges_.push_back(edge);
        edge_faces_.push_back(std::move(fs));
    }

    incidence_offsets_.assign(num_vertices_ + 1, 0);
    for (int v = 0; v < num_vertices_; ++v) {
        incidence_offsets_[v + 1] = incidence_offsets_[v] + degree[v];
    }
    incidence_.resize(incidence_offsets_.back());
    std::vector<int> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    for (int f = 0; f < num_faces(); ++f) {
        const Face& face = faces_[f];
        for (int c = 0; c < 3; ++c) {
            bool seen = false;
            for (int d = 0; d < c; ++d) seen |= face[d] == face[c];
            if (!seen) incidence_[cursor[face[c]]++] = f;
        }
    }
}

std::span<const int> Triangulation::faces_of(int v) const
{
    if (v < 0 || v >= num_vertices_) {
        throw DomainError("vertex index out of range");
    }
    return std::span<const int>(incidence_).subspan(
        incidence_offsets_[v], incidence_offsets_[v + 1] - incidence_offsets_[v]);
}

Triangulation Triangulation::relabeled(std::span<const int> perm) const
{
    if (static_cast<int>(perm.size()) != num_vertices_) {
        throw DomainError("permutation size does not match vertex count");
    }
    std::vector<Face> faces = faces_;
    for (Face& face : faces) {
        for (int& v : face) v = perm[v];
    }
    return Triangulation(num_vertices_, std::move(faces));
}

namespace
{

// The link of v is the graph on its neighbours whose edges are the sides of
// the incident faces opposite v. A closed surface needs it to be one cycle.
bool link_is_single_cycle(const Triangulation& tri, int v)
{
    std::map<int, std::vector<int>> adjacency;
    int link_edges = 0;
    for (int f : tri.faces_of(v)) {
        const Face& face = tri.faces()[f];
        int others[2];
        int n = 0;
        for (int w : face) {
            if (w != v && n < 2) others[n++] = w;
        }
        if (n != 2) return false;
        adjacency[others[0]].push_back(others[1]);
        adjacency[others[1]].push_back(others[0]);
        ++link_edges;
    }
    if (adjacency.size() < 3) return false;
    for (const auto& [w, nbrs] : adjacency) {
        if (nbrs.size() != 2) return false;
    }
    // walk the cycle from the smallest neighbour
    const int start = adjacency.begin()->first;
    int prev = -1;
    int cur = start;
    int steps = 0;
    do {
        const auto& nbrs = adjacency[cur];
        const int next = nbrs[0] != prev ? nbrs[0] : nbrs[1];
        prev = cur;
        cur = next;
        ++steps;
    } while (cur != start && steps <= link_edges);
    return steps == link_edges && static_cast<int>(adjacency.size()) == link_edges;
}

}  // namespace

std::vector<Defect> validate(const Triangulation& tri)
{
    std::vector<Defect> defects;
    const auto& faces = tri.faces();
    for (int f = 0; f < tri.num_faces(); ++f) {
        const Face& face = faces[f];
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
            std::ostringstream msg;
            msg << "face " << f << " (" << face[0] << ", " << face[1] << ", " << face[2]
                << ") repeats a vertex";
            defects.push_back({DefectKind::RepeatedVertex, f, {-1, -1}, 0, msg.str()});
        }
    }

    for (std::size_t e = 0; e < tri.edges().size(); ++e) {
        const int count = static_cast<int>(tri.edge_faces()[e].size());
        if (count != 2) {
            const Edge& edge = tri.edges()[e];
            std::ostringstream msg;
            msg << "edge (" << edge.first << ", " << edge.second << ") lies in " << count
                << " face(s), expected 2";
            defects.push_back({DefectKind::EdgeFaceCount, -1, edge, count, msg.str()});
        }
    }

    for (int v = 0; v < tri.num_vertices(); ++v) {
        if (tri.faces_of(v).empty()) {
            defects.push_back({DefectKind::IsolatedVertex, v, {-1, -1}, 0,
                               "vertex " + std::to_string(v) + " belongs to no face"});
        } else if (!link_is_single_cycle(tri, v)) {
            defects.push_back({DefectKind::VertexLink, v, {-1, -1}, 0,
                               "link of vertex " + std::to_string(v) + " is not a single closed cycle"});
        }
    }

    // face adjacency through shared edges
    if (tri.num_faces() > 0) {
        std::vector<int> parent(tri.num_faces());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& fs : tri.edge_faces()) {
            for (std::size_t i = 1; i < fs.size(); ++i) {
                parent[find(fs[i])] = find(fs[0]);
            }
        }
        int components = 0;
        for (int f = 0; f < tri.num_faces(); ++f) components += find(f) == f;
        if (components > 1) {
            defects.push_back({DefectKind::Disconnected, -1, {-1, -1}, components,
                               "face adjacency graph has " + std::to_string(components) + " components"});
        }
    } else {
        defects.push_back({DefectKind::Disconnected, -1, {-1, -1}, 0, "triangulation has no faces"});
    }
    return defects;
}

int faces_incident(const Triangulation& tri, std::span<const int> subset)
{
    std::vector<char> in_subset(tri.num_vertices(), 0);
    for (int v : subset) {
        if (v < 0 || v >= tri.num_vertices()) {
            throw DomainError("subset vertex " + std::to_string(v) + " out of range");
        }
        in_subset[v] = 1;
    }
    int count = 0;
    for (const Face& face : tri.faces()) {
        count += in_subset[face[0]] || in_subset[face[1]] || in_subset[face[2]];
    }
    return count;
}

int euler_characteristic(const Triangulation& tri)
{
    return tri.num_vertices() - tri.num_edges() + tri.num_faces();
}

namespace
{

std::vector<int> mask_to_subset(std::uint32_t mask)
{
    std::vector<int> out;
    for (int v = 0; mask != 0; ++v, mask >>= 1) {
        if (mask & 1u) out.push_back(v);
    }
    return out;
}

// true if subset a should be preferred over b on a tie
bool prefer_on_tie(std::uint32_t a, std::uint32_t b)
{
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return mask_to_subset(a) < mask_to_subset(b);
}

}  // namespace

AdmissibilityResult check_admissible(const Triangulation& tri, std::span<const double> targets)
{
    const int n = tri.num_vertices();
    if (static_cast<int>(targets.size()) != n) {
        throw DomainError("target vector length " + std::to_string(targets.size()) +
                          " does not match vertex count " + std::to_string(n));
    }
    for (int v = 0; v < n; ++v) {
        if (!(targets[v] > 0.0) || !std::isfinite(targets[v])) {
            throw DomainError("target curvature at vertex " + std::to_string(v) + " must be positive");
        }
    }
    if (n > kMaxAdmissibilityVertices) {
        throw CapacityError("exhaustive admissibility check is limited to " +
                            std::to_string(kMaxAdmissibilityVertices) +
                            " vertices; rely on the flow's divergence diagnostics instead");
    }

    const double pi = std::numbers::pi;
    // per-face count of vertices currently in I
    std::vector<int> hits(tri.num_faces(), 0);
    int covered = 0;
    double sum = 0.0;
    std::uint32_t mask = 0;

    double best_excess = -std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;

    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t g = 1; g < total; ++g) {
        // Gray code: flip the lowest set bit position of g
        const int v = std::countr_zero(g);
        const std::uint32_t bit = std::uint32_t{1} << v;
        const bool adding = (mask & bit) == 0;
        mask ^= bit;
        for (int f : tri.faces_of(v)) {
            if (adding) {
                covered += hits[f]++ == 0;
            } else {
                covered -= --hits[f] == 0;
            }
        }
        sum += adding ? targets[v] : -targets[v];

        const double excess = sum - pi * covered;
        if (best_mask == 0) {
            best_excess = excess;
            best_mask = mask;
            continue;
        }
        const double tie_tol = 1e-12 * (1.0 + std::abs(best_excess));
        if (excess > best_excess + tie_tol) {
            best_excess = excess;
            best_mask = mask;
        } else if (std::abs(excess - best_excess) <= tie_tol && prefer_on_tie(mask, best_mask)) {
            best_excess = std::max(best_excess, excess);
            best_mask = mask;
        }
    }

    // recompute the winner in index order so the reported numbers are exact
    const std::vector<int> subset = mask_to_subset(best_mask);
    double exact_sum = 0.0;
    for (int v : subset) exact_sum += targets[v];
    const double exact_excess = exact_sum - pi * faces_incident(tri, subset);
    if (exact_excess >= 0.0) {
        return Violated{subset, exact_excess};
    }
    return Admissible{-exact_excess};
}

}  // namespace gcp
