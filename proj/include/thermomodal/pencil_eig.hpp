#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "thermomodal/core.hpp"
#include "thermomodal/errors.hpp"

namespace thermomodal {

// Eigenvalues are reported as temporal exponents: mu such that d = chi e^{mu t}
// solves A d' + B d = 0, i.e. (B + mu A) chi = 0. For the dissipative coupled
// system this puts thermal eigenvalues on the negative real axis and
// structural ones near the imaginary axis, closed under conjugation.
struct ComplexEigenSet {
    CVec values;
    CMat vectors;  // columns aligned with values; empty when not requested
    bool has_vectors = false;

    int count() const { return static_cast<int>(values.size()); }
};

// One diagonal block of A = blkdiag(sign_i * spd_i) with spd_i positive
// definite. The coupled model has (K_ss, -), (M_ss, +), (D_TT/T0, -); the
// reduced models have (diag Lambda, -), (I, +), (I, -).
struct PencilBlock {
    Mat spd;
    double sign;  // +1 or -1
};

namespace detail {

inline void canonical_sort(ComplexEigenSet& es) {
    std::vector<int> order(es.count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const Complex &x = es.values[a], &y = es.values[b];
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax < ay;
        if (x.imag() != y.imag()) return x.imag() > y.imag();
        return x.real() < y.real();
    });
    CVec v(es.count());
    for (int i = 0; i < es.count(); ++i) v[i] = es.values[order[i]];
    es.values = v;
    if (es.has_vectors) {
        CMat V(es.vectors.rows(), es.vectors.cols());
        for (int i = 0; i < es.count(); ++i) V.col(i) = es.vectors.col(order[i]);
        es.vectors = V;
    }
}

// Rayleigh-quotient refinement of dgeev output using the bilinear symmetry of
// the pencil: mu = -(x^T B x)/(x^T A x). Quadratic in the eigenvector error,
// so it removes the O(eps * ||B||) absolute noise that otherwise dominates the
// small-magnitude (thermal) eigenvalues. Conjugate pairs stay exact pairs.
inline void rq_polish(const Mat& A, const Mat& B, const double* wi, const Mat& vr,
                      ComplexEigenSet& es) {
    const int n = es.count();
    const Mat BV = B * vr;
    const Mat AV = A * vr;
    for (int j = 0; j < n; ++j) {
        if (wi[j] == 0.0) {
            const double num = vr.col(j).dot(BV.col(j));
            const double den = vr.col(j).dot(AV.col(j));
            if (den != 0.0) es.values[j] = Complex(-num / den, 0.0);
        } else if (wi[j] > 0.0 && j + 1 < n) {
            // x = vr(:,j) + i vr(:,j+1); bilinear products via real parts
            const auto xr = vr.col(j), xi = vr.col(j + 1);
            const Complex num(xr.dot(BV.col(j)) - xi.dot(BV.col(j + 1)),
                              xr.dot(BV.col(j + 1)) + xi.dot(BV.col(j)));
            const Complex den(xr.dot(AV.col(j)) - xi.dot(AV.col(j + 1)),
                              xr.dot(AV.col(j + 1)) + xi.dot(AV.col(j)));
            if (den != Complex(0.0, 0.0)) {
                const Complex mu = -num / den;
                es.values[j] = mu;
                es.values[j + 1] = std::conj(mu);
            }
        }
    }
}

}  // namespace detail

// Full spectrum of A d' + B d = 0 with A = blkdiag(sign_i spd_i) and B
// symmetric. The SPD blocks are Cholesky-factored, A = L S L^T, and the
// problem becomes a standard dense one, G = -S L^{-1} B L^{-T}, which LAPACK
// balances; eigenvalues are then polished through the symmetric Rayleigh
// quotient. This keeps the small thermal eigenvalues accurate despite the
// huge dynamic range of the coupled pencil.
inline ComplexEigenSet sym_state_pencil_eig(const std::vector<PencilBlock>& blocks,
                                            const Mat& B, bool want_vectors = true) {
    int n = 0;
    for (const auto& blk : blocks) n += static_cast<int>(blk.spd.rows());
    if (B.rows() != n || B.cols() != n)
        throw DimensionError("sym_state_pencil_eig: block sizes do not match B");

    Mat L = Mat::Zero(n, n);
    Vec S(n);
    Mat A = Mat::Zero(n, n);
    int off = 0;
    for (const auto& blk : blocks) {
        const int m = static_cast<int>(blk.spd.rows());
        Eigen::LLT<Mat> llt(blk.spd);
        if (llt.info() != Eigen::Success)
            throw InvalidModelError("sym_state_pencil_eig: singular A block");
        L.block(off, off, m, m) = llt.matrixL();
        S.segment(off, m).setConstant(blk.sign);
        A.block(off, off, m, m) = blk.sign * blk.spd;
        off += m;
    }

    // G = -S L^{-1} B L^{-T}
    Mat Z = L.triangularView<Eigen::Lower>().solve(B);
    Mat C = L.triangularView<Eigen::Lower>().solve(Z.transpose()).transpose();
    Mat G = (-S.array()).matrix().asDiagonal() * C;

    // dgeev eigenvectors live in y = L^T x space; map columns back first.
    // (Back-transform commutes with the real packing of complex pairs.)
    const int nn = n;
    std::vector<double> wr(nn), wi(nn);
    Mat vr(nn, nn);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', nn, G.data(), nn, wr.data(), wi.data(),
                      nullptr, 1, vr.data(), nn);
    if (info != 0)
        throw Error("dgeev failed to converge (info=" + std::to_string(info) + ")");

    Mat xr = L.transpose().triangularView<Eigen::Upper>().solve(vr);
    for (int j = 0; j < nn; ++j) {
        const double norm = xr.col(j).norm();
        if (norm > 0) xr.col(j) /= norm;
    }

    ComplexEigenSet es;
    es.values.resize(nn);
    for (int j = 0; j < nn; ++j) es.values[j] = Complex(wr[j], wi[j]);
    detail::rq_polish(A, B, wi.data(), xr, es);

    if (want_vectors) {
        es.vectors.resize(nn, nn);
        for (int j = 0; j < nn; ++j) {
            if (wi[j] == 0.0) {
                es.vectors.col(j) = xr.col(j).cast<Complex>();
            } else if (wi[j] > 0.0 && j + 1 < nn) {
                es.vectors.col(j) = xr.col(j) + Complex(0, 1) * xr.col(j + 1);
                es.vectors.col(j + 1) = es.vectors.col(j).conjugate();
                ++j;
            }
        }
        es.has_vectors = true;
    }
    detail::canonical_sort(es);
    return es;
}

// Same spectrum for a general symmetric pencil (A possibly indefinite without
// known block structure, e.g. the congruence-projected superposition model):
// dense QZ plus the same Rayleigh-quotient polish.
inline ComplexEigenSet sym_pencil_eig_qz(const Mat& A, const Mat& B, bool want_vectors = true) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw DimensionError("sym_pencil_eig_qz: dimension mismatch");
    const Mat negB = -B;
    Eigen::GeneralizedEigenSolver<Mat> ges;
    ges.compute(negB, A, true);
    if (ges.info() != Eigen::Success)
        throw Error("generalized eigensolver failed to converge");

    const int n = static_cast<int>(A.rows());
    ComplexEigenSet es;
    es.values.resize(n);
    es.vectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        es.values[j] = ges.eigenvalues()[j];
        es.vectors.col(j) = ges.eigenvectors().col(j);
    }
    es.has_vectors = true;

    // Bilinear Rayleigh quotient polish in complex arithmetic.
    const CMat BV = B * es.vectors;
    const CMat AV = A * es.vectors;
    for (int j = 0; j < n; ++j) {
        const Complex num = (es.vectors.col(j).transpose() * BV.col(j))(0);
        const Complex den = (es.vectors.col(j).transpose() * AV.col(j))(0);
        if (den != Complex(0.0, 0.0)) es.values[j] = -num / den;
    }
    // Snap conjugate pairs: match each value of positive imaginary part with
    // its closest negative partner.
    for (int j = 0; j < n; ++j) {
        if (es.values[j].imag() <= 0.0) continue;
        int best = -1;
        double bd = std::numeric_limits<double>::max();
        for (int k = 0; k < n; ++k) {
            if (es.values[k].imag() >= 0.0) continue;
            const double d = std::abs(es.values[k] - std::conj(es.values[j]));
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        if (best >= 0) {
            es.values[best] = std::conj(es.values[j]);
            es.vectors.col(best) = es.vectors.col(j).conjugate();
        }
    }
    if (!want_vectors) {
        es.vectors.resize(0, 0);
        es.has_vectors = false;
    }
    detail::canonical_sort(es);
    return es;
}

}  // namespace thermomodal
