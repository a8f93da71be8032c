#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "thermomodal/core.hpp"
#include "thermomodal/dofmap.hpp"
#include "thermomodal/element.hpp"
#include "thermomodal/errors.hpp"

namespace thermomodal {

// Constrained global blocks of the coupled second-order system:
//   M_ss u" + K_ss u - K_sT theta            = f_s
//   T0 K_Ts u' + D_TT theta' + K_TT theta    = Q_T
// Thermal blocks are stored with the 1/T0 scaling applied
// (thermal_capacity = D_TT/T0, thermal_conductivity = K_TT/T0), which makes
// the state-space form symmetric with K_Ts = K_sT^T.
struct CoupledSecondOrderModel {
    SpMat mass;                  // M_ss, N_s x N_s
    SpMat stiffness;             // K_ss, N_s x N_s
    SpMat thermal_capacity;      // D_TT/T0, N_T x N_T
    SpMat thermal_conductivity;  // K_TT/T0, N_T x N_T
    SpMat coupling;              // K_sT (unscaled), N_s x N_T
    DofMap dofs;
    MaterialProps material;

    int n_struct() const { return static_cast<int>(stiffness.rows()); }
    int n_thermal() const { return static_cast<int>(thermal_conductivity.rows()); }

    SpMat coupling_transpose() const { return SpMat(coupling.transpose()); }
};

// Scatter-adds element blocks into the constrained global matrices.
// Constrained rows/columns are eliminated, never penalized, so the square
// blocks stay symmetric positive (semi)definite. Element order is fixed, so
// the assembly is bitwise reproducible.
inline CoupledSecondOrderModel assemble_system(const Mesh& mesh, const MaterialProps& mat,
                                               const DofMap& dofs) {
    mat.validate();
    if (dofs.n_struct < 1 || dofs.n_thermal < 1)
        throw InvalidModelError("assemble_system: zero free DOFs in a physics field");

    const int ns = dofs.n_struct, nt = dofs.n_thermal;
    std::vector<Triplet> tm, tk, td, tkt, tc;
    tm.reserve(mesh.num_elements() * 64);
    tk.reserve(mesh.num_elements() * 64);
    td.reserve(mesh.num_elements() * 16);
    tkt.reserve(mesh.num_elements() * 16);
    tc.reserve(mesh.num_elements() * 32);

    const double inv_T0 = 1.0 / mat.reference_temperature;

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        std::array<Eigen::Vector2d, 4> xy;
        for (int a = 0; a < 4; ++a) xy[a] = mesh.nodes[conn[a]];

        ElementMatrices em;
        try {
            em = element_matrices(xy, mat, mesh.thickness);
        } catch (const AssemblyError& err) {
            throw AssemblyError(std::string(err.what()) + " (element " + std::to_string(e) + ")");
        }

        int sdof[8], tdof[4];
        for (int a = 0; a < 4; ++a) {
            sdof[2 * a] = dofs.node_to_struct_x[conn[a]];
            sdof[2 * a + 1] = dofs.node_to_struct_y[conn[a]];
            tdof[a] = dofs.node_to_thermal[conn[a]];
        }

        for (int a = 0; a < 8; ++a) {
            if (sdof[a] < 0) continue;
            for (int b = 0; b < 8; ++b) {
                if (sdof[b] < 0) continue;
                tm.emplace_back(sdof[a], sdof[b], em.mass(a, b));
                tk.emplace_back(sdof[a], sdof[b], em.stiffness(a, b));
            }
            for (int b = 0; b < 4; ++b)
                if (tdof[b] >= 0) tc.emplace_back(sdof[a], tdof[b], em.coupling(a, b));
        }
        for (int a = 0; a < 4; ++a) {
            if (tdof[a] < 0) continue;
            for (int b = 0; b < 4; ++b) {
                if (tdof[b] < 0) continue;
                td.emplace_back(tdof[a], tdof[b], inv_T0 * em.thermal_capacity(a, b));
                tkt.emplace_back(tdof[a], tdof[b], inv_T0 * em.conductivity(a, b));
            }
        }
    }

    CoupledSecondOrderModel model;
    model.mass.resize(ns, ns);
    model.stiffness.resize(ns, ns);
    model.thermal_capacity.resize(nt, nt);
    model.thermal_conductivity.resize(nt, nt);
    model.coupling.resize(ns, nt);
    model.mass.setFromTriplets(tm.begin(), tm.end());
    model.stiffness.setFromTriplets(tk.begin(), tk.end());
    model.thermal_capacity.setFromTriplets(td.begin(), td.end());
    model.thermal_conductivity.setFromTriplets(tkt.begin(), tkt.end());
    model.coupling.setFromTriplets(tc.begin(), tc.end());
    model.dofs = dofs;
    model.material = mat;

    // LDLT pivots expose rigid-body modes more reliably than a bare LLT
    // success flag: near-zero pivots mean K_ss is singular to working
    // precision even if the factorization nominally completes.
    Eigen::SimplicialLDLT<SpMat> chol(model.stiffness);
    bool singular = chol.info() != Eigen::Success;
    if (!singular) {
        const Vec d = chol.vectorD();
        singular = d.minCoeff() <= 1e-13 * d.maxCoeff();
    }
    if (singular)
        throw RigidBodyModeError("assemble_system: K_ss singular after BCs (rigid body modes)");

    return model;
}

}  // namespace thermomodal
