#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thermomodal/errors.hpp"

namespace thermomodal {

struct PlateGeometry {
    double height = 0.0;    // h [m], y extent
    double width = 0.0;     // l [m], x extent
    double thickness = 0.0; // t [m]

    void validate() const {
        if (!(height > 0.0 && width > 0.0 && thickness > 0.0))
            throw InvalidInputError("plate geometry: h, l, t must all be positive");
    }
};

// Structured quadrilateral mesh. Elements are counterclockwise 4-node quads;
// node_sets carry the named index sets used by BCs and excitations. The
// out-of-plane thickness is uniform.
struct Mesh {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 4>> elements;
    std::map<std::string, std::vector<int>> node_sets;
    double thickness = 1.0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }

    const std::vector<int>& node_set(const std::string& name) const {
        auto it = node_sets.find(name);
        if (it == node_sets.end())
            throw InvalidInputError("unknown node set '" + name + "'");
        return it->second;
    }
};

namespace detail {

// Jacobian determinant of the bilinear map at a reference point (xi, eta).
inline double quad_jacobian_det(const std::array<Eigen::Vector2d, 4>& xy,
                                double xi, double eta) {
    const double dxi[4] = {-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)};
    const double det_[4] = {-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)};
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 4; ++k) {
        J(0, 0) += 0.25 * dxi[k] * xy[k].x();
        J(0, 1) += 0.25 * dxi[k] * xy[k].y();
        J(1, 0) += 0.25 * det_[k] * xy[k].x();
        J(1, 1) += 0.25 * det_[k] * xy[k].y();
    }
    return J.determinant();
}

inline constexpr double gauss_point = 0.5773502691896257;  // 1/sqrt(3)

}  // namespace detail

// Checks element connectivity, node-set references, and that every element's
// Jacobian determinant is positive at all 2x2 Gauss points.
inline void validate_mesh(const Mesh& mesh) {
    const int n = mesh.num_nodes();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        for (int a = 0; a < 4; ++a) {
            if (conn[a] < 0 || conn[a] >= n)
                throw InvalidInputError("element " + std::to_string(e) + " references invalid node");
            for (int b = a + 1; b < 4; ++b)
                if (conn[a] == conn[b])
                    throw InvalidInputError("element " + std::to_string(e) + " has repeated nodes");
        }
        std::array<Eigen::Vector2d, 4> xy;
        for (int a = 0; a < 4; ++a) xy[a] = mesh.nodes[conn[a]];
        const double g = detail::gauss_point;
        for (double xi : {-g, g})
            for (double eta : {-g, g})
                if (!(detail::quad_jacobian_det(xy, xi, eta) > 0.0))
                    throw InvalidInputError("element " + std::to_string(e) +
                                            " has non-positive Jacobian");
    }
    for (const auto& [name, set] : mesh.node_sets)
        for (int idx : set)
            if (idx < 0 || idx >= n)
                throw InvalidInputError("node set '" + name + "' references invalid node");
}

// Uniform (nx x ny)-element grid on [0, l] x [0, h]. Node numbering is
// x-fastest, row-major; edge sets are populated for BC assignment.
inline Mesh generate_plate_mesh(const PlateGeometry& geom, int nx, int ny) {
    geom.validate();
    if (nx < 1 || ny < 1)
        throw InvalidInputError("generate_plate_mesh: nx and ny must be >= 1");

    Mesh mesh;
    mesh.thickness = geom.thickness;
    const int nnx = nx + 1, nny = ny + 1;
    mesh.nodes.reserve(static_cast<size_t>(nnx) * nny);
    for (int j = 0; j < nny; ++j)
        for (int i = 0; i < nnx; ++i)
            mesh.nodes.emplace_back(geom.width * i / nx, geom.height * j / ny);

    mesh.elements.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int n0 = j * nnx + i;
            mesh.elements.push_back({n0, n0 + 1, n0 + nnx + 1, n0 + nnx});
        }

    auto& sets = mesh.node_sets;
    for (int j = 0; j < nny; ++j) {
        sets["left_edge"].push_back(j * nnx);
        sets["right_edge"].push_back(j * nnx + nx);
    }
    for (int i = 0; i < nnx; ++i) {
        sets["bottom_edge"].push_back(i);
        sets["top_edge"].push_back(ny * nnx + i);
    }

    validate_mesh(mesh);
    return mesh;
}

// Index of the node closest to (x, y); first such node on ties.
inline int nearest_node(const Mesh& mesh, double x, double y) {
    if (mesh.nodes.empty())
        throw InvalidInputError("nearest_node: empty mesh");
    int best = 0;
    double best_d = (mesh.nodes[0] - Eigen::Vector2d(x, y)).squaredNorm();
    for (int i = 1; i < mesh.num_nodes(); ++i) {
        const double d = (mesh.nodes[i] - Eigen::Vector2d(x, y)).squaredNorm();
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

}  // namespace thermomodal
