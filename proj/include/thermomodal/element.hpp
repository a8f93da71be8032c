#pragma once

#include <array>

#include <Eigen/Dense>

#include "thermomodal/errors.hpp"
#include "thermomodal/material.hpp"
#include "thermomodal/mesh.hpp"

namespace thermomodal {

// Per-element blocks of the coupled thermoelastic system for a 4-node
// bilinear quad: consistent mass, structural stiffness, thermal capacity,
// thermal conductivity, and the structure-thermal coupling. The thermal
// blocks here are unscaled (the assembly applies the 1/T0 factor).
struct ElementMatrices {
    Eigen::Matrix<double, 8, 8> mass;
    Eigen::Matrix<double, 8, 8> stiffness;
    Eigen::Matrix<double, 4, 4> thermal_capacity;
    Eigen::Matrix<double, 4, 4> conductivity;
    Eigen::Matrix<double, 8, 4> coupling;
};

// In-plane constitutive matrix for the selected 2-D reduction.
inline Eigen::Matrix3d constitutive_matrix(const MaterialProps& mat) {
    const double E = mat.youngs_modulus, nu = mat.poisson_ratio;
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    if (mat.plane_model == PlaneModel::plane_stress) {
        const double f = E / (1.0 - nu * nu);
        C(0, 0) = C(1, 1) = f;
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1.0 - nu) / 2.0;
    } else {
        const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
        C(0, 0) = C(1, 1) = f * (1.0 - nu);
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1.0 - 2.0 * nu) / 2.0;
    }
    return C;
}

// 2x2 Gauss quadrature of the five coupled-block integrands. The coupling
// block integrates B_u^T beta m N_theta with m the in-plane trace selector,
// so the assembled K_Ts equals K_sT^T exactly by shared construction.
inline ElementMatrices element_matrices(const std::array<Eigen::Vector2d, 4>& coords,
                                        const MaterialProps& mat, double thickness) {
    ElementMatrices em;
    em.mass.setZero();
    em.stiffness.setZero();
    em.thermal_capacity.setZero();
    em.conductivity.setZero();
    em.coupling.setZero();

    const Eigen::Matrix3d C = constitutive_matrix(mat);
    const double beta = mat.beta_2d();
    const double c_vol = mat.volumetric_heat_capacity();
    const double g = detail::gauss_point;

    for (double xi : {-g, g}) {
        for (double eta : {-g, g}) {
            Eigen::Vector4d N;
            N << 0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                 0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta);
            Eigen::Matrix<double, 4, 2> dN_ref;
            dN_ref << -(1 - eta), -(1 - xi),
                       (1 - eta), -(1 + xi),
                       (1 + eta),  (1 + xi),
                      -(1 + eta),  (1 - xi);
            dN_ref *= 0.25;

            Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
            for (int k = 0; k < 4; ++k) {
                J(0, 0) += dN_ref(k, 0) * coords[k].x();
                J(0, 1) += dN_ref(k, 0) * coords[k].y();
                J(1, 0) += dN_ref(k, 1) * coords[k].x();
                J(1, 1) += dN_ref(k, 1) * coords[k].y();
            }
            const double detJ = J.determinant();
            if (!(detJ > 0.0))
                throw AssemblyError("degenerate element: non-positive Jacobian");
            const Eigen::Matrix<double, 4, 2> dN = dN_ref * J.inverse();

            Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
            Eigen::Matrix<double, 2, 8> Nu = Eigen::Matrix<double, 2, 8>::Zero();
            for (int k = 0; k < 4; ++k) {
                B(0, 2 * k) = dN(k, 0);
                B(1, 2 * k + 1) = dN(k, 1);
                B(2, 2 * k) = dN(k, 1);
                B(2, 2 * k + 1) = dN(k, 0);
                Nu(0, 2 * k) = N(k);
                Nu(1, 2 * k + 1) = N(k);
            }

            const double w = detJ * thickness;  // unit Gauss weights
            em.stiffness += w * B.transpose() * C * B;
            em.mass += (w * mat.density) * Nu.transpose() * Nu;
            em.conductivity += (w * mat.conductivity) * dN * dN.transpose();
            em.thermal_capacity += (w * c_vol) * N * N.transpose();

            Eigen::Vector3d m(1.0, 1.0, 0.0);
            em.coupling += (w * beta) * (B.transpose() * m) * N.transpose();
        }
    }
    return em;
}

}  // namespace thermomodal
