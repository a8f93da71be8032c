#pragma once

#include <set>
#include <string>
#include <vector>

#include "thermomodal/mesh.hpp"

namespace thermomodal {

// Names of node sets whose displacement / temperature DOFs are fixed to zero.
struct BoundarySpec {
    std::vector<std::string> fixed_displacement;
    std::vector<std::string> fixed_temperature;
};

// Free-DOF numbering for both physics. Structural DOFs are numbered node-index
// major with x before y; thermal DOFs node-index major. Constrained DOFs map
// to -1 and appear in no inverse map.
struct DofMap {
    int n_struct = 0;   // N_s: number of free structural DOFs
    int n_thermal = 0;  // N_T: number of free thermal DOFs

    std::vector<int> node_to_struct_x;  // node -> free structural x DOF or -1
    std::vector<int> node_to_struct_y;
    std::vector<int> node_to_thermal;   // node -> free thermal DOF or -1
    std::vector<int> struct_to_node;    // free structural DOF -> node
    std::vector<int> thermal_to_node;   // free thermal DOF -> node
};

inline DofMap build_dof_map(const Mesh& mesh, const BoundarySpec& bc) {
    std::set<int> fixed_s, fixed_t;
    for (const auto& name : bc.fixed_displacement)
        for (int n : mesh.node_set(name)) fixed_s.insert(n);
    for (const auto& name : bc.fixed_temperature)
        for (int n : mesh.node_set(name)) fixed_t.insert(n);

    DofMap dofs;
    const int n = mesh.num_nodes();
    dofs.node_to_struct_x.assign(n, -1);
    dofs.node_to_struct_y.assign(n, -1);
    dofs.node_to_thermal.assign(n, -1);

    for (int i = 0; i < n; ++i) {
        if (!fixed_s.count(i)) {
            dofs.node_to_struct_x[i] = dofs.n_struct++;
            dofs.struct_to_node.push_back(i);
            dofs.node_to_struct_y[i] = dofs.n_struct++;
            dofs.struct_to_node.push_back(i);
        }
        if (!fixed_t.count(i)) {
            dofs.node_to_thermal[i] = dofs.n_thermal++;
            dofs.thermal_to_node.push_back(i);
        }
    }
    return dofs;
}

}  // namespace thermomodal
