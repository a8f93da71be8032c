#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "thermomodal/analysis.hpp"
#include "thermomodal/assembly.hpp"
#include "thermomodal/core.hpp"
#include "thermomodal/eigensolve.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/statespace.hpp"

namespace thermomodal {

enum class ReductionMethod { uncoupled, two_step, superposition };

inline const char* method_name(ReductionMethod m) {
    switch (m) {
        case ReductionMethod::uncoupled: return "uncoupled";
        case ReductionMethod::two_step: return "two_step";
        case ReductionMethod::superposition: return "superposition";
    }
    return "?";
}

// Reduced symmetric state-space model A_r d_r' + B_r d_r = T^T f together
// with the projection back to full coordinates, d ~ T d_r. For the uncoupled
// and two-step constructions A_r = diag(-Lambda, I, -I) exactly and the
// stored modal bases carry (Lambda, Phi) and (Theta, Xi).
struct ReducedStateSpaceModel {
    ReductionMethod method = ReductionMethod::uncoupled;
    int n_struct_modes = 0;   // n_s
    int n_thermal_modes = 0;  // n_t
    int full_n_struct = 0;    // N_s
    int full_n_thermal = 0;   // N_T
    Mat A;
    Mat B;
    Mat T;                    // (2 N_s + N_T) x (2 n_s + n_t)
    Vec structural_eigenvalues;
    Mat structural_modes;
    Vec thermal_eigenvalues;
    Mat thermal_modes;
    CVec retained_values;     // superposition only: the projected coupled eigenvalues
    double inv_T0 = 0.0;

    int dim() const { return static_cast<int>(A.rows()); }

    Vec project_load(const Vec& f_full) const {
        if (f_full.size() != T.rows())
            throw DimensionError("project_load: dimension mismatch");
        return T.transpose() * f_full;
    }
};

namespace detail {

inline void check_mode_counts(const CoupledSecondOrderModel& model, int n_s, int n_t) {
    if (n_s < 1 || n_s > model.n_struct())
        throw InvalidInputError("reduction: structural mode count out of range");
    if (n_t < 1 || n_t > model.n_thermal())
        throw InvalidInputError("reduction: thermal mode count out of range");
}

// A_r, B_r, T from single-field bases; shared by the uncoupled and two-step
// constructions (they differ only in the thermal basis handed in).
inline ReducedStateSpaceModel assemble_reduced(const CoupledSecondOrderModel& model,
                                               const ModalBasis& structural,
                                               const ModalBasis& thermal,
                                               ReductionMethod method) {
    const int ns = structural.count(), nt = thermal.count();
    const int Ns = model.n_struct(), Nt = model.n_thermal();
    const int m = 2 * ns + nt;

    ReducedStateSpaceModel r;
    r.method = method;
    r.n_struct_modes = ns;
    r.n_thermal_modes = nt;
    r.full_n_struct = Ns;
    r.full_n_thermal = Nt;
    r.structural_eigenvalues = structural.eigenvalues;
    r.structural_modes = structural.vectors;
    r.thermal_eigenvalues = thermal.eigenvalues;
    r.thermal_modes = thermal.vectors;
    r.inv_T0 = 1.0 / model.material.reference_temperature;

    r.A = Mat::Zero(m, m);
    r.A.topLeftCorner(ns, ns).diagonal() = -structural.eigenvalues;
    r.A.block(ns, ns, ns, ns).setIdentity();
    r.A.bottomRightCorner(nt, nt) = -Mat::Identity(nt, nt);

    const Mat cpl = structural.vectors.transpose() * (model.coupling * thermal.vectors);

    r.B = Mat::Zero(m, m);
    r.B.block(0, ns, ns, ns).diagonal() = structural.eigenvalues;
    r.B.block(ns, 0, ns, ns).diagonal() = structural.eigenvalues;
    r.B.block(ns, 2 * ns, ns, nt) = -cpl;
    r.B.block(2 * ns, ns, nt, ns) = -cpl.transpose();
    r.B.bottomRightCorner(nt, nt).diagonal() = -thermal.eigenvalues;

    r.T = Mat::Zero(2 * Ns + Nt, m);
    r.T.block(0, 0, Ns, ns) = structural.vectors;
    r.T.block(Ns, ns, Ns, ns) = structural.vectors;
    r.T.block(2 * Ns, 2 * ns, Nt, nt) = thermal.vectors;
    return r;
}

}  // namespace detail

// Conventional reduction: each field projected on eigenvectors of its own
// single-field problem, coupling ignored in the bases.
inline ReducedStateSpaceModel reduce_uncoupled(const CoupledSecondOrderModel& model,
                                               int n_s, int n_t) {
    detail::check_mode_counts(model, n_s, n_t);
    const ModalBasis structural =
        sym_gen_eig(Mat(model.stiffness), Mat(model.mass), n_s, MetricTag::structural_mass);
    const ModalBasis thermal =
        sym_gen_eig(Mat(model.thermal_conductivity), Mat(model.thermal_capacity), n_t,
                    MetricTag::thermal_capacity);
    return detail::assemble_reduced(model, structural, thermal, ReductionMethod::uncoupled);
}

// Truncated-structural-mode contribution to the thermal capacity metric,
//   Psi = K_Ts [K_ss^{-1} - Phi Lambda^{-1} Phi^T] K_sT,
// evaluated as an N_s x N_T sparse-Cholesky solve minus a low-rank
// correction; the N_s x N_s dense residual flexibility is never formed.
struct ResidualFlexibilityProduct {
    Mat matrix;  // N_T x N_T dense symmetric PSD
};

inline ResidualFlexibilityProduct residual_flexibility_coupling(
    const CoupledSecondOrderModel& model, const Vec& lambda_d, const Mat& phi_d) {
    if (phi_d.cols() != lambda_d.size() ||
        (phi_d.cols() > 0 && phi_d.rows() != model.n_struct()))
        throw DimensionError("residual_flexibility_coupling: basis dimensions mismatch");
    for (int i = 0; i < lambda_d.size(); ++i)
        if (!(lambda_d[i] > 0.0))
            throw InvalidBasisError("residual_flexibility_coupling: non-positive eigenvalue");

    Eigen::SimplicialLLT<SpMat> chol(model.stiffness);
    if (chol.info() != Eigen::Success)
        throw RigidBodyModeError("residual_flexibility_coupling: K_ss not SPD");
    counters::stiffness_factorizations()++;

    const Mat K_sT = Mat(model.coupling);
    const Mat X = chol.solve(K_sT);            // K_ss^{-1} K_sT, column-wise
    Mat full_term = K_sT.transpose() * X;      // K_Ts K_ss^{-1} K_sT
    full_term = 0.5 * (full_term + full_term.transpose());

    ResidualFlexibilityProduct out;
    if (lambda_d.size() == 0) {
        out.matrix = full_term;
        return out;
    }
    const Mat W = phi_d.transpose() * K_sT;    // n_s x N_T
    const Mat low_rank = W.transpose() * lambda_d.cwiseInverse().asDiagonal() * W;
    out.matrix = full_term - low_rank;
    out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
    return out;
}

// Two-step reduction: structural modes first, their truncated-mode effect
// folded into the thermal capacity through the residual flexibility, then the
// thermal field reduced with the updated eigenproblem
//   K^_TT xi = gamma (D^_TT + Psi) xi.
inline ReducedStateSpaceModel reduce_two_step(const CoupledSecondOrderModel& model,
                                              int n_s, int n_t) {
    detail::check_mode_counts(model, n_s, n_t);
    const ModalBasis structural =
        sym_gen_eig(Mat(model.stiffness), Mat(model.mass), n_s, MetricTag::structural_mass);
    const ResidualFlexibilityProduct psi =
        residual_flexibility_coupling(model, structural.eigenvalues, structural.vectors);
    const Mat capacity_updated = Mat(model.thermal_capacity) + psi.matrix;
    const ModalBasis thermal =
        sym_gen_eig(Mat(model.thermal_conductivity), capacity_updated, n_t,
                    MetricTag::updated_thermal_capacity);
    return detail::assemble_reduced(model, structural, thermal, ReductionMethod::two_step);
}

// Same reduction derived along the second-order path: residual statics
// applied to the displacement split, thermal metric updated with an
// explicitly formed dense residual flexibility, the reduced second-order
// blocks built, and only then converted to first-order form. Serves as an
// independent algebraic route; it must agree with reduce_two_step to
// roundoff.
inline ReducedStateSpaceModel reduce_two_step_second_order(const CoupledSecondOrderModel& model,
                                                           int n_s, int n_t) {
    detail::check_mode_counts(model, n_s, n_t);
    const ModalBasis structural =
        sym_gen_eig(Mat(model.stiffness), Mat(model.mass), n_s, MetricTag::structural_mass);

    for (int i = 0; i < structural.eigenvalues.size(); ++i)
        if (!(structural.eigenvalues[i] > 0.0))
            throw InvalidBasisError("reduce_two_step_second_order: non-positive eigenvalue");

    // Residual flexibility formed explicitly (dense N_s x N_s): fine at desk
    // scale, and deliberately a different evaluation than the primary route.
    Eigen::SimplicialLLT<SpMat> chol(model.stiffness);
    if (chol.info() != Eigen::Success)
        throw RigidBodyModeError("reduce_two_step_second_order: K_ss not SPD");
    counters::stiffness_factorizations()++;
    const int Ns = model.n_struct();
    const Mat K_inv = chol.solve(Mat::Identity(Ns, Ns));
    const Mat residual_flex =
        K_inv - structural.vectors *
                    structural.eigenvalues.cwiseInverse().asDiagonal() *
                    structural.vectors.transpose();

    const Mat K_sT = Mat(model.coupling);
    Mat psi = K_sT.transpose() * residual_flex * K_sT;
    psi = 0.5 * (psi + psi.transpose());
    const Mat capacity_updated = Mat(model.thermal_capacity) + psi;
    const ModalBasis thermal =
        sym_gen_eig(Mat(model.thermal_conductivity), capacity_updated, n_t,
                    MetricTag::updated_thermal_capacity);

    // Reduced second-order blocks in (q, r):
    //   mass_qq q" + damp_rq q' + damp_rr r' + stiff_qq q + stiff_qr r = g
    const int ns = n_s, nt = n_t;
    const Mat cpl = structural.vectors.transpose() * (K_sT * thermal.vectors);
    const Mat mass_qq = Mat::Identity(ns, ns);
    const Mat stiff_qq = Mat(structural.eigenvalues.asDiagonal());
    const Mat stiff_qr = -cpl;
    const Mat damp_rq = -cpl.transpose();
    const Mat damp_rr = -Mat::Identity(nt, nt);
    const Mat stiff_rr = -Mat(thermal.eigenvalues.asDiagonal());

    // First-order conversion, mirroring the full model's state-space pattern.
    const int m = 2 * ns + nt;
    ReducedStateSpaceModel r;
    r.method = ReductionMethod::two_step;
    r.n_struct_modes = ns;
    r.n_thermal_modes = nt;
    r.full_n_struct = Ns;
    r.full_n_thermal = model.n_thermal();
    r.structural_eigenvalues = structural.eigenvalues;
    r.structural_modes = structural.vectors;
    r.thermal_eigenvalues = thermal.eigenvalues;
    r.thermal_modes = thermal.vectors;
    r.inv_T0 = 1.0 / model.material.reference_temperature;

    r.A = Mat::Zero(m, m);
    r.A.topLeftCorner(ns, ns) = -stiff_qq;
    r.A.block(ns, ns, ns, ns) = mass_qq;
    r.A.bottomRightCorner(nt, nt) = damp_rr;

    r.B = Mat::Zero(m, m);
    r.B.block(0, ns, ns, ns) = stiff_qq;
    r.B.block(ns, 0, ns, ns) = stiff_qq;
    r.B.block(ns, 2 * ns, ns, nt) = stiff_qr;
    r.B.block(2 * ns, ns, nt, ns) = damp_rq;
    r.B.bottomRightCorner(nt, nt) = stiff_rr;

    r.T = Mat::Zero(2 * Ns + model.n_thermal(), m);
    r.T.block(0, 0, Ns, ns) = structural.vectors;
    r.T.block(Ns, ns, Ns, ns) = structural.vectors;
    r.T.block(2 * Ns, 2 * ns, model.n_thermal(), nt) = thermal.vectors;
    return r;
}

// Reference method: congruence projection of (A, B) onto coupled eigenvectors
// of the full pencil, class-balanced (n_t thermal vectors plus n_s structural
// conjugate pairs realified as (Re, Im) columns), reduced dimension
// 2 n_s + n_t. Expensive to construct by design: it needs the full coupled
// eigensolution.
inline ReducedStateSpaceModel reduce_mode_superposition(const SymStateSpaceModel& ssm,
                                                        int n_s, int n_t,
                                                        const ComplexEigenSet* precomputed = nullptr,
                                                        int dense_limit = 5000) {
    if (n_s < 1 || n_s > ssm.n_struct || n_t < 1 || n_t > ssm.n_thermal)
        throw InvalidInputError("reduce_mode_superposition: mode counts out of range");

    ComplexEigenSet local;
    const ComplexEigenSet* eig = precomputed;
    if (eig == nullptr || !eig->has_vectors) {
        local = full_eigensolution(ssm, true, dense_limit);
        eig = &local;
    }

    const ClassifiedSpectrum cs = classify(*eig, ssm.n_thermal);

    // Locate the retained thermal values / structural pairs in the eigen set.
    const int n = eig->count();
    std::vector<int> thermal_idx, pair_idx;
    {
        std::vector<int> real_all, upper_all;
        for (int i = 0; i < n; ++i) {
            if (detail::is_real_at(eig->values[i], cs.tolerance_used))
                real_all.push_back(i);
            else if (eig->values[i].imag() > 0.0)
                upper_all.push_back(i);
        }
        std::sort(real_all.begin(), real_all.end(), [&](int a, int b) {
            return std::abs(eig->values[a]) < std::abs(eig->values[b]);
        });
        std::sort(upper_all.begin(), upper_all.end(), [&](int a, int b) {
            return eig->values[a].imag() < eig->values[b].imag();
        });
        thermal_idx.assign(real_all.begin(), real_all.begin() + n_t);
        pair_idx.assign(upper_all.begin(), upper_all.begin() + n_s);
    }

    const int m = 2 * n_s + n_t;
    Mat T(ssm.dim(), m);
    CVec retained(n_s + n_t);
    for (int j = 0; j < n_s; ++j) {
        const auto chi = eig->vectors.col(pair_idx[j]);
        T.col(2 * j) = chi.real();
        T.col(2 * j + 1) = chi.imag();
        retained[j] = eig->values[pair_idx[j]];
    }
    for (int j = 0; j < n_t; ++j) {
        T.col(2 * n_s + j) = eig->vectors.col(thermal_idx[j]).real();
        retained[n_s + j] = eig->values[thermal_idx[j]];
    }
    for (int j = 0; j < m; ++j) {
        const double norm = T.col(j).norm();
        if (norm > 0) T.col(j) /= norm;
    }

    ReducedStateSpaceModel r;
    r.method = ReductionMethod::superposition;
    r.n_struct_modes = n_s;
    r.n_thermal_modes = n_t;
    r.full_n_struct = ssm.n_struct;
    r.full_n_thermal = ssm.n_thermal;
    r.T = T;
    r.A = T.transpose() * (ssm.A * T);
    r.B = T.transpose() * (ssm.B * T);
    r.retained_values = retained;
    r.inv_T0 = ssm.inv_T0;
    return r;
}

// Eigenvalues of a reduced model, through the block-structured kernel when
// A_r is the exact diag(-Lambda, I, -I) form and dense QZ otherwise.
inline ComplexEigenSet reduced_eigensolution(const ReducedStateSpaceModel& r,
                                             bool want_vectors = true) {
    if (r.method == ReductionMethod::superposition)
        return sym_pencil_eig_qz(r.A, r.B, want_vectors);
    std::vector<PencilBlock> blocks;
    blocks.push_back({Mat(r.structural_eigenvalues.asDiagonal()), -1.0});
    blocks.push_back({Mat::Identity(r.n_struct_modes, r.n_struct_modes), +1.0});
    blocks.push_back({Mat::Identity(r.n_thermal_modes, r.n_thermal_modes), -1.0});
    return sym_state_pencil_eig(blocks, r.B, want_vectors);
}

// d ~ T d_r, rows are samples.
inline Mat reconstruct(const ReducedStateSpaceModel& r, const Mat& reduced_states) {
    if (reduced_states.cols() != r.dim())
        throw DimensionError("reconstruct: state dimension mismatch");
    return reduced_states * r.T.transpose();
}

inline Vec reconstruct(const ReducedStateSpaceModel& r, const Vec& reduced_state) {
    if (reduced_state.size() != r.dim())
        throw DimensionError("reconstruct: state dimension mismatch");
    return r.T * reduced_state;
}

}  // namespace thermomodal
