#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "thermomodal/core.hpp"
#include "thermomodal/errors.hpp"

namespace thermomodal {

enum class MetricTag { structural_mass, thermal_capacity, updated_thermal_capacity, generic };

// Partial spectrum of a symmetric-definite generalized eigenproblem
// K phi = lambda M phi, metric-normalized: Phi^T M Phi = I.
struct ModalBasis {
    Vec eigenvalues;  // ascending
    Mat vectors;      // N x k, columns metric-normalized
    MetricTag metric = MetricTag::generic;

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

// Deterministic eigenvector orientation: largest-magnitude entry positive.
inline void fix_sign(Mat& vectors) {
    for (int j = 0; j < vectors.cols(); ++j) {
        int idx = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&idx);
        if (vectors(idx, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

}  // namespace detail

// The k smallest eigenpairs, computed by Cholesky reduction of the metric to
// a standard symmetric problem (dense, desk scale). Shared by both reduction
// methods; accepts dense metrics (the updated thermal capacity is full).
inline ModalBasis sym_gen_eig(const Mat& K, const Mat& M, int k,
                              MetricTag tag = MetricTag::generic) {
    const int n = static_cast<int>(K.rows());
    if (K.cols() != n || M.rows() != n || M.cols() != n)
        throw DimensionError("sym_gen_eig: dimension mismatch");
    if (k < 1 || k > n)
        throw InvalidInputError("sym_gen_eig: requested count out of range");

    Eigen::LLT<Mat> metric_chol(M);
    if (metric_chol.info() != Eigen::Success)
        throw MetricError("sym_gen_eig: metric matrix is not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(K, M,
        Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw Error("sym_gen_eig: eigensolver failed to converge");

    counters::single_field_eigensolves()++;

    ModalBasis basis;
    basis.eigenvalues = solver.eigenvalues().head(k);
    basis.vectors = solver.eigenvectors().leftCols(k);
    basis.metric = tag;
    detail::fix_sign(basis.vectors);
    return basis;
}

inline ModalBasis sym_gen_eig(const SpMat& K, const SpMat& M, int k,
                              MetricTag tag = MetricTag::generic) {
    return sym_gen_eig(Mat(K), Mat(M), k, tag);
}

}  // namespace thermomodal
