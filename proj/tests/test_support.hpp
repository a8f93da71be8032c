#pragma once

// Shared test fixtures and independent oracles. The oracles here deliberately
// avoid the library's solver paths: the generalized eigenproblem oracle runs
// a hand-rolled cyclic Jacobi on the Cholesky-reduced standard problem.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "thermomodal/assembly.hpp"
#include "thermomodal/core.hpp"
#include "thermomodal/dofmap.hpp"
#include "thermomodal/mesh.hpp"

namespace testsup {

using thermomodal::Mat;
using thermomodal::SpMat;
using thermomodal::Vec;

// Deterministic xorshift64 in [0, 1).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    }
};

inline Mat random_matrix(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = 2.0 * rng.next() - 1.0;
    return m;
}

inline Mat random_spd(int n, Rng& rng) {
    const Mat q = random_matrix(n, n, rng);
    return q * q.transpose() + n * Mat::Identity(n, n);
}

// Cyclic Jacobi for a dense symmetric matrix; returns ascending eigenvalues
// and orthonormal vectors.
inline void jacobi_eig(Mat a, Vec& values, Mat& vectors) {
    const int n = static_cast<int>(a.rows());
    vectors = Mat::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                Eigen::JacobiRotation<double> rot(c, s);
                a.applyOnTheLeft(p, q, rot.adjoint());
                a.applyOnTheRight(p, q, rot);
                vectors.applyOnTheRight(p, q, rot);
            }
        }
        if (off < 1e-26 * a.squaredNorm()) break;
    }
    values.resize(n);
    for (int i = 0; i < n; ++i) values[i] = a(i, i);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return values[x] < values[y]; });
    Vec v2(n);
    Mat m2(n, n);
    for (int i = 0; i < n; ++i) {
        v2[i] = values[order[i]];
        m2.col(i) = vectors.col(order[i]);
    }
    values = v2;
    vectors = m2;
}

// Generalized K phi = lambda M phi by Cholesky reduction + Jacobi; vectors
// are M-normalized.
inline void jacobi_gen_eig(const Mat& K, const Mat& M, Vec& values, Mat& vectors) {
    const Eigen::LLT<Mat> llt(M);
    const Mat L = llt.matrixL();
    const Mat reduced = L.triangularView<Eigen::Lower>().solve(
        L.triangularView<Eigen::Lower>().solve(K).transpose());
    Mat y;
    jacobi_eig(0.5 * (reduced + reduced.transpose()), values, y);
    vectors = L.transpose().triangularView<Eigen::Upper>().solve(y);
}

// Synthetic coupled model from dense blocks (for randomized reduction tests).
inline thermomodal::CoupledSecondOrderModel synthetic_model(const Mat& K, const Mat& M,
                                                            const Mat& Khat, const Mat& Dhat,
                                                            const Mat& coupling) {
    thermomodal::CoupledSecondOrderModel model;
    model.stiffness = K.sparseView();
    model.mass = M.sparseView();
    model.thermal_conductivity = Khat.sparseView();
    model.thermal_capacity = Dhat.sparseView();
    model.coupling = coupling.sparseView();
    model.material.youngs_modulus = 1.0;
    model.material.poisson_ratio = 0.3;
    model.material.density = 1.0;
    model.material.thermal_expansion = 1.0;
    model.material.conductivity = 1.0;
    model.material.specific_heat = 1.0;
    model.material.reference_temperature = 298.15;
    return model;
}

inline thermomodal::CoupledSecondOrderModel random_model(int ns, int nt, uint64_t seed) {
    Rng rng(seed);
    return synthetic_model(random_spd(ns, rng), random_spd(ns, rng), random_spd(nt, rng),
                           random_spd(nt, rng), random_matrix(ns, nt, rng));
}

// Standard silicon-plate fixture; BCs on the left edge for both physics.
struct PlateFixture {
    thermomodal::Mesh mesh;
    thermomodal::DofMap dofs;
    thermomodal::CoupledSecondOrderModel model;
};

inline thermomodal::MaterialProps silicon() {
    thermomodal::MaterialProps m;
    m.youngs_modulus = 1.624e11;
    m.poisson_ratio = 0.28;
    m.density = 2330.0;
    m.thermal_expansion = 2.54e-6;
    m.conductivity = 145.0;
    m.specific_heat = 711.0;
    m.reference_temperature = 298.15;
    return m;
}

inline PlateFixture make_plate(int nx, int ny, double width = 0.140, double height = 0.042,
                               double thickness = 0.001,
                               thermomodal::MaterialProps mat = silicon()) {
    PlateFixture f;
    f.mesh = thermomodal::generate_plate_mesh({height, width, thickness}, nx, ny);
    thermomodal::BoundarySpec bc;
    bc.fixed_displacement = {"left_edge"};
    bc.fixed_temperature = {"left_edge"};
    f.dofs = thermomodal::build_dof_map(f.mesh, bc);
    f.model = thermomodal::assemble_system(f.mesh, mat, f.dofs);
    return f;
}

}  // namespace testsup
