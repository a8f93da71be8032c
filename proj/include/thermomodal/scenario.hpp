#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermomodal/dofmap.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/material.hpp"
#include "thermomodal/mesh.hpp"
#include "thermomodal/reduction.hpp"
#include "thermomodal/transient.hpp"

namespace thermomodal {

// Extra node sets a scenario may define on top of the generated edge sets.
struct NodeSetSpec {
    std::string name;
    std::optional<std::array<double, 2>> nearest_to;  // pick node closest to (x, y)
    std::vector<int> explicit_nodes;
    bool all_nodes = false;
};

enum class FieldFormat { csv, npy };

struct IntegratorConfig {
    double t_end = 0.0;
    int samples = 2;
    double rel_tol = 1e-8;
    double abs_tol = 1e-11;
    bool fixed_step = false;
    double fixed_dt = 0.0;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<double> field_snapshot_times;
    FieldFormat field_format = FieldFormat::csv;
};

struct ScenarioConfig {
    std::string name;
    PlateGeometry geometry;
    int nx = 0, ny = 0;
    MaterialProps material;
    std::vector<NodeSetSpec> node_sets;
    BoundarySpec boundary;
    int n_struct_modes = 0;
    int n_thermal_modes = 0;
    std::vector<ReductionMethod> methods;
    ExcitationSpec excitation;
    IntegratorConfig integrator;
    OutputConfig output;
    bool run_transient = true;
    long seed = 0;  // reserved; the numerics are deterministic
};

namespace detail {

using nlohmann::json;

template <typename T>
T require(const json& j, const std::string& field, const std::string& ctx) {
    if (!j.contains(field))
        throw ConfigError("config: missing field '" + ctx + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: field '" + ctx + field + "' has the wrong type");
    }
}

template <typename T>
T optional_field(const json& j, const std::string& field, T fallback) {
    if (!j.contains(field)) return fallback;
    return j.at(field).get<T>();
}

inline ReductionMethod parse_method(const std::string& s) {
    if (s == "uncoupled") return ReductionMethod::uncoupled;
    if (s == "two_step") return ReductionMethod::two_step;
    if (s == "superposition") return ReductionMethod::superposition;
    throw ConfigError("config: unknown method '" + s + "' in field 'methods'");
}

inline ExcitationKind parse_kind(const std::string& s, const std::string& ctx) {
    if (s == "constant") return ExcitationKind::constant;
    if (s == "sinusoid") return ExcitationKind::sinusoid;
    throw ConfigError("config: unknown excitation kind '" + s + "' in " + ctx);
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
    using detail::require;
    using detail::optional_field;
    ScenarioConfig cfg;
    cfg.name = optional_field<std::string>(j, "name", "scenario");

    const auto geom = require<nlohmann::json>(j, "geometry", "");
    cfg.geometry.height = require<double>(geom, "height_m", "geometry.");
    cfg.geometry.width = require<double>(geom, "width_m", "geometry.");
    cfg.geometry.thickness = require<double>(geom, "thickness_m", "geometry.");

    const auto mesh = require<nlohmann::json>(j, "mesh", "");
    cfg.nx = require<int>(mesh, "nx", "mesh.");
    cfg.ny = require<int>(mesh, "ny", "mesh.");

    const auto mat = require<nlohmann::json>(j, "material", "");
    cfg.material.youngs_modulus = require<double>(mat, "youngs_modulus_pa", "material.");
    cfg.material.poisson_ratio = require<double>(mat, "poisson_ratio", "material.");
    cfg.material.density = require<double>(mat, "density_kg_m3", "material.");
    cfg.material.thermal_expansion = require<double>(mat, "thermal_expansion_per_k", "material.");
    cfg.material.conductivity = require<double>(mat, "conductivity_w_mk", "material.");
    cfg.material.specific_heat = require<double>(mat, "specific_heat_j_kgk", "material.");
    // Reference temperature is configured in Celsius; the Kelvin conversion is
    // explicit here because 1/T0 in the symmetric form is an absolute factor.
    cfg.material.reference_temperature =
        celsius_to_kelvin(require<double>(mat, "reference_temperature_c", "material."));
    const std::string plane = optional_field<std::string>(mat, "plane_model", "plane_stress");
    if (plane == "plane_stress")
        cfg.material.plane_model = PlaneModel::plane_stress;
    else if (plane == "plane_strain")
        cfg.material.plane_model = PlaneModel::plane_strain;
    else
        throw ConfigError("config: material.plane_model must be plane_stress or plane_strain");

    if (j.contains("node_sets")) {
        for (const auto& ns : j.at("node_sets")) {
            NodeSetSpec spec;
            spec.name = require<std::string>(ns, "name", "node_sets[].");
            if (ns.contains("nearest_to")) {
                const auto pt = ns.at("nearest_to");
                if (!pt.is_array() || pt.size() != 2)
                    throw ConfigError("config: node_sets[].nearest_to must be [x, y]");
                spec.nearest_to = {{pt[0].get<double>(), pt[1].get<double>()}};
            }
            if (ns.contains("nodes"))
                spec.explicit_nodes = ns.at("nodes").get<std::vector<int>>();
            spec.all_nodes = optional_field<bool>(ns, "all", false);
            cfg.node_sets.push_back(std::move(spec));
        }
    }

    const auto bc = require<nlohmann::json>(j, "boundary", "");
    cfg.boundary.fixed_displacement =
        require<std::vector<std::string>>(bc, "fixed_displacement", "boundary.");
    cfg.boundary.fixed_temperature =
        require<std::vector<std::string>>(bc, "fixed_temperature", "boundary.");

    const auto modes = require<nlohmann::json>(j, "modes", "");
    cfg.n_struct_modes = require<int>(modes, "structural", "modes.");
    cfg.n_thermal_modes = require<int>(modes, "thermal", "modes.");

    for (const auto& m : require<std::vector<std::string>>(j, "methods", ""))
        cfg.methods.push_back(detail::parse_method(m));

    if (j.contains("excitation")) {
        const auto& ex = j.at("excitation");
        if (ex.contains("structural")) {
            for (const auto& e : ex.at("structural")) {
                StructuralExcitation s;
                s.node_set = require<std::string>(e, "set", "excitation.structural[].");
                const std::string dir = require<std::string>(e, "direction", "excitation.structural[].");
                if (dir == "x")
                    s.direction = 0;
                else if (dir == "y")
                    s.direction = 1;
                else
                    throw ConfigError("config: excitation.structural[].direction must be x or y");
                s.amplitude = require<double>(e, "amplitude_n", "excitation.structural[].");
                s.angular_frequency = optional_field<double>(e, "angular_frequency_rad_s", 0.0);
                s.kind = detail::parse_kind(
                    require<std::string>(e, "kind", "excitation.structural[]."),
                    "excitation.structural[]");
                cfg.excitation.structural.push_back(std::move(s));
            }
        }
        if (ex.contains("thermal")) {
            for (const auto& e : ex.at("thermal")) {
                ThermalExcitation t;
                t.node_set = require<std::string>(e, "set", "excitation.thermal[].");
                t.amplitude = require<double>(e, "amplitude_w", "excitation.thermal[].");
                t.angular_frequency = optional_field<double>(e, "angular_frequency_rad_s", 0.0);
                t.kind = detail::parse_kind(require<std::string>(e, "kind", "excitation.thermal[]."),
                                            "excitation.thermal[]");
                cfg.excitation.thermal.push_back(std::move(t));
            }
        }
    }

    const auto integ = require<nlohmann::json>(j, "integrator", "");
    cfg.integrator.t_end = require<double>(integ, "t_end_s", "integrator.");
    cfg.integrator.samples = require<int>(integ, "samples", "integrator.");
    cfg.integrator.rel_tol = optional_field<double>(integ, "rel_tol", 1e-8);
    cfg.integrator.abs_tol = optional_field<double>(integ, "abs_tol", 1e-11);
    cfg.integrator.fixed_step = optional_field<bool>(integ, "fixed_step", false);
    cfg.integrator.fixed_dt = optional_field<double>(integ, "fixed_dt_s", 0.0);

    if (j.contains("output")) {
        const auto& out = j.at("output");
        cfg.output.directory = optional_field<std::string>(out, "directory", "out");
        cfg.output.field_snapshot_times =
            optional_field<std::vector<double>>(out, "field_snapshot_times_s", {});
        const std::string ff = optional_field<std::string>(out, "field_format", "csv");
        if (ff == "csv")
            cfg.output.field_format = FieldFormat::csv;
        else if (ff == "npy")
            cfg.output.field_format = FieldFormat::npy;
        else
            throw ConfigError("config: output.field_format must be csv or npy");
    }
    cfg.run_transient = optional_field<bool>(j, "run_transient", true);
    cfg.seed = optional_field<long>(j, "seed", 0L);
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    return parse_scenario(j);
}

// Builds the scenario mesh including the custom node sets.
inline Mesh build_scenario_mesh(const ScenarioConfig& cfg) {
    Mesh mesh = generate_plate_mesh(cfg.geometry, cfg.nx, cfg.ny);
    for (const auto& spec : cfg.node_sets) {
        std::vector<int>& set = mesh.node_sets[spec.name];
        if (spec.all_nodes)
            for (int i = 0; i < mesh.num_nodes(); ++i) set.push_back(i);
        if (spec.nearest_to)
            set.push_back(nearest_node(mesh, (*spec.nearest_to)[0], (*spec.nearest_to)[1]));
        for (int n : spec.explicit_nodes) {
            if (n < 0 || n >= mesh.num_nodes())
                throw ConfigError("config: node_sets['" + spec.name + "'] references node " +
                                  std::to_string(n) + " outside the mesh");
            set.push_back(n);
        }
    }
    return mesh;
}

// Static validation: resolves every cross-reference and reports diagnostics
// without running the numerics. Returns human-readable findings; empty means
// the scenario is runnable.
inline std::vector<std::string> validate_scenario(const ScenarioConfig& cfg,
                                                  int* resolved_n_struct = nullptr,
                                                  int* resolved_n_thermal = nullptr) {
    std::vector<std::string> diags;
    try {
        cfg.geometry.validate();
    } catch (const Error& e) {
        diags.emplace_back(e.what());
    }
    try {
        cfg.material.validate();
    } catch (const Error& e) {
        diags.emplace_back(e.what());
    }
    if (cfg.nx < 1 || cfg.ny < 1) diags.emplace_back("mesh: nx and ny must be >= 1");
    if (!diags.empty()) return diags;

    Mesh mesh;
    try {
        mesh = build_scenario_mesh(cfg);
    } catch (const Error& e) {
        diags.emplace_back(e.what());
        return diags;
    }

    auto check_set = [&](const std::string& name, const std::string& ctx) {
        if (!mesh.node_sets.count(name))
            diags.emplace_back(ctx + ": unknown node set '" + name + "'");
    };
    for (const auto& s : cfg.boundary.fixed_displacement) check_set(s, "boundary.fixed_displacement");
    for (const auto& s : cfg.boundary.fixed_temperature) check_set(s, "boundary.fixed_temperature");
    for (const auto& e : cfg.excitation.structural) check_set(e.node_set, "excitation.structural");
    for (const auto& e : cfg.excitation.thermal) check_set(e.node_set, "excitation.thermal");
    if (!diags.empty()) return diags;

    const DofMap dofs = build_dof_map(mesh, cfg.boundary);
    if (resolved_n_struct) *resolved_n_struct = dofs.n_struct;
    if (resolved_n_thermal) *resolved_n_thermal = dofs.n_thermal;
    if (dofs.n_struct < 1) diags.emplace_back("boundary: no free structural DOFs remain");
    if (dofs.n_thermal < 1) diags.emplace_back("boundary: no free thermal DOFs remain");

    if (cfg.n_struct_modes < 1 || cfg.n_struct_modes > dofs.n_struct)
        diags.emplace_back("modes.structural = " + std::to_string(cfg.n_struct_modes) +
                           " out of range 1.." + std::to_string(dofs.n_struct));
    if (cfg.n_thermal_modes < 1 || cfg.n_thermal_modes > dofs.n_thermal)
        diags.emplace_back("modes.thermal = " + std::to_string(cfg.n_thermal_modes) +
                           " out of range 1.." + std::to_string(dofs.n_thermal));
    if (cfg.methods.empty()) diags.emplace_back("methods: at least one reduction method required");
    if (cfg.run_transient) {
        if (!(cfg.integrator.t_end > 0)) diags.emplace_back("integrator.t_end_s must be positive");
        if (cfg.integrator.samples < 2) diags.emplace_back("integrator.samples must be >= 2");
    }
    for (double t : cfg.output.field_snapshot_times)
        if (t < 0 || t > cfg.integrator.t_end)
            diags.emplace_back("output.field_snapshot_times_s: " + std::to_string(t) +
                               " outside [0, t_end]");
    return diags;
}

}  // namespace thermomodal
