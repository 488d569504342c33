#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "gcpack/surface.hpp"

namespace gcp::test
{

inline Triangulation tetrahedron()
{
    return Triangulation(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

inline Triangulation octahedron()
{
    return Triangulation(6, {{0, 2, 4}, {0, 4, 3}, {0, 3, 5}, {0, 5, 2}, {1, 4, 2}, {1, 3, 4}, {1, 5, 3}, {1, 2, 5}});
}

// 3x3 grid torus, vertex (i, j) -> 3 i + j
inline std::vector<Face> grid_torus_faces(int offset)
{
    std::vector<Face> faces;
    auto v = [offset](int i, int j) { return offset + 3 * (i % 3) + (j % 3); };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            faces.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
            faces.push_back({v(i, j), v(i + 1, j + 1), v(i, j + 1)});
        }
    }
    return faces;
}

inline Triangulation torus()
{
    return Triangulation(9, grid_torus_faces(0));
}

/** Deterministic generator for property tests */
class Sampler
{
public:
    explicit Sampler(unsigned seed) : engine_{seed} {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    /** log-uniform on [lo, hi] */
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Eigen::VectorXd vector(int n, double lo, double hi)
    {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    std::mt19937& engine() { return engine_; }

private:
    std::mt19937 engine_;
};

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace gcp::test
