#pragma once

#include <vector>

#include "thermomodal/assembly.hpp"
#include "thermomodal/core.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/pencil_eig.hpp"

namespace thermomodal {

// Symmetric first-order form A d' + B d = f with state d = (u, u', theta):
//   A = diag(-K_ss, M_ss, -D_TT/T0)
//   B = [[0, K_ss, 0], [K_ss, 0, -K_sT], [0, -K_Ts, -K_TT/T0]]
//   f = (0, f_s, -Q_T/T0)
struct SymStateSpaceModel {
    SpMat A;
    SpMat B;
    // The SPD diagonal blocks of A, kept for block factorizations (eigensolve,
    // time integration) without reslicing A.
    SpMat stiffness;
    SpMat mass;
    SpMat thermal_capacity;
    int n_struct = 0;
    int n_thermal = 0;
    double inv_T0 = 0.0;

    int dim() const { return 2 * n_struct + n_thermal; }

    // Load map of the symmetric form: f_s into the velocity rows, -Q_T/T0
    // into the thermal rows.
    Vec assemble_load(const Vec& f_s, const Vec& Q_T) const {
        if (f_s.size() != n_struct || Q_T.size() != n_thermal)
            throw DimensionError("assemble_load: dimension mismatch");
        Vec f = Vec::Zero(dim());
        f.segment(n_struct, n_struct) = f_s;
        f.segment(2 * n_struct, n_thermal) = -inv_T0 * Q_T;
        return f;
    }
};

inline SymStateSpaceModel to_state_space(const CoupledSecondOrderModel& model) {
    const int ns = model.n_struct(), nt = model.n_thermal();
    SymStateSpaceModel ssm;
    ssm.n_struct = ns;
    ssm.n_thermal = nt;
    ssm.inv_T0 = 1.0 / model.material.reference_temperature;

    std::vector<Triplet> ta, tb;
    ta.reserve(model.stiffness.nonZeros() + model.mass.nonZeros() +
               model.thermal_capacity.nonZeros());
    tb.reserve(2 * model.stiffness.nonZeros() + 2 * model.coupling.nonZeros() +
               model.thermal_conductivity.nonZeros());

    for (int c = 0; c < model.stiffness.outerSize(); ++c)
        for (SpMat::InnerIterator it(model.stiffness, c); it; ++it) {
            ta.emplace_back(it.row(), it.col(), -it.value());                    // A11 = -K
            tb.emplace_back(it.row(), ns + it.col(), it.value());                // B12 =  K
            tb.emplace_back(ns + it.row(), it.col(), it.value());                // B21 =  K
        }
    for (int c = 0; c < model.mass.outerSize(); ++c)
        for (SpMat::InnerIterator it(model.mass, c); it; ++it)
            ta.emplace_back(ns + it.row(), ns + it.col(), it.value());           // A22 =  M
    for (int c = 0; c < model.thermal_capacity.outerSize(); ++c)
        for (SpMat::InnerIterator it(model.thermal_capacity, c); it; ++it)
            ta.emplace_back(2 * ns + it.row(), 2 * ns + it.col(), -it.value());  // A33 = -D^
    for (int c = 0; c < model.coupling.outerSize(); ++c)
        for (SpMat::InnerIterator it(model.coupling, c); it; ++it) {
            tb.emplace_back(ns + it.row(), 2 * ns + it.col(), -it.value());      // B23 = -K_sT
            tb.emplace_back(2 * ns + it.col(), ns + it.row(), -it.value());      // B32 = -K_Ts
        }
    for (int c = 0; c < model.thermal_conductivity.outerSize(); ++c)
        for (SpMat::InnerIterator it(model.thermal_conductivity, c); it; ++it)
            tb.emplace_back(2 * ns + it.row(), 2 * ns + it.col(), -it.value());  // B33 = -K^

    const int n = ssm.dim();
    ssm.A.resize(n, n);
    ssm.B.resize(n, n);
    ssm.A.setFromTriplets(ta.begin(), ta.end());
    ssm.B.setFromTriplets(tb.begin(), tb.end());
    ssm.stiffness = model.stiffness;
    ssm.mass = model.mass;
    ssm.thermal_capacity = model.thermal_capacity;
    return ssm;
}

// All 2 N_s + N_T eigenvalues of the coupled model (temporal exponents, see
// ComplexEigenSet). Dense at desk scale; above the limit the scenario has to
// be downscaled.
inline ComplexEigenSet full_eigensolution(const SymStateSpaceModel& ssm,
                                          bool want_vectors = true,
                                          int dense_limit = 5000) {
    if (ssm.dim() > dense_limit)
        throw CapacityError("full_eigensolution: dimension " + std::to_string(ssm.dim()) +
                            " exceeds dense limit " + std::to_string(dense_limit) +
                            "; downscale the scenario");
    counters::coupled_eigensolves()++;
    std::vector<PencilBlock> blocks;
    blocks.push_back({Mat(ssm.stiffness), -1.0});
    blocks.push_back({Mat(ssm.mass), +1.0});
    blocks.push_back({Mat(ssm.thermal_capacity), -1.0});
    return sym_state_pencil_eig(blocks, Mat(ssm.B), want_vectors);
}

}  // namespace thermomodal
