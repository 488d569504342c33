#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gcp
{

using Face = std::array<int, 3>;
using Edge = std::pair<int, int>;

/**
 * @brief Combinatorial closed triangulated surface.
 *
 * Holds the raw face list plus derived edges (sorted, unordered pairs) and
 * vertex-to-face incidence. Construction never throws on topological
 * defects; call validate() to inspect them. Indices must be in range.
 */
class Triangulation
{
public:
    Triangulation(int num_vertices, std::vector<Face> faces);

    int num_vertices() const { return num_vertices_; }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /** Faces containing vertex v, in face order */
    std::span<const int> faces_of(int v) const;

    /** Number of faces incident to v */
    int face_degree(int v) const { return static_cast<int>(faces_of(v).size()); }

    /** Faces sharing each edge, parallel to edges() */
    const std::vector<std::vector<int>>& edge_faces() const { return edge_faces_; }

    /** Same surface with vertex v renamed to perm[v] */
    Triangulation relabeled(std::span<const int> perm) const;

private:
    int num_vertices_;
    std::vector<Face> faces_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> edge_faces_;
    std::vector<int> incidence_offsets_;
    std::vector<int> incidence_;
};

enum class DefectKind {
    RepeatedVertex,
    EdgeFaceCount,
    VertexLink,
    IsolatedVertex,
    Disconnected,
};

struct Defect {
    DefectKind kind;
    /** Face index, vertex index or -1 depending on the kind */
    int location{-1};
    /** Edge for EdgeFaceCount, otherwise (-1, -1) */
    Edge edge{-1, -1};
    int count{0};
    std::string message;
};

/** All violations of the closed-surface invariants; empty means valid */
std::vector<Defect> validate(const Triangulation& tri);

/** |F_I|: faces having at least one vertex in the subset */
int faces_incident(const Triangulation& tri, std::span<const int> subset);

/** V - E + F */
int euler_characteristic(const Triangulation& tri);

inline constexpr int kMaxAdmissibilityVertices = 25;

struct Admissible {
    /** min over nonempty I of pi |F_I| - sum_{i in I} L_i (> 0) */
    double margin;
};

struct Violated {
    /** Sorted vertex subset with sum_{i in I} L_i >= pi |F_I| */
    std::vector<int> witness;
    double excess;
};

using AdmissibilityResult = std::variant<Admissible, Violated>;

/**
 * @brief Decide whether the targets lie in the polytope
 * { L > 0 : sum_{i in I} L_i < pi |F_I| for all nonempty I }.
 *
 * Exhaustive over subsets (Gray-code order, incremental |F_I|), so capped at
 * kMaxAdmissibilityVertices. The witness maximizes the excess; near ties
 * (relative 1e-12) go to the smaller subset, then the lexicographically
 * smaller one.
 */
AdmissibilityResult check_admissible(const Triangulation& tri, std::span<const double> targets);

}  // namespace gcp
