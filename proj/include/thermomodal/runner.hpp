#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermomodal/analysis.hpp"
#include "thermomodal/assembly.hpp"
#include "thermomodal/mmio.hpp"
#include "thermomodal/reduction.hpp"
#include "thermomodal/scenario.hpp"
#include "thermomodal/statespace.hpp"
#include "thermomodal/transient.hpp"

namespace thermomodal {

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

struct MethodRunSummary {
    ReductionMethod method = ReductionMethod::uncoupled;
    double construction_seconds = 0.0;
    ErrorReport errors;
    double transient_seconds = 0.0;
    double max_dtheta = 0.0;  // max over time of the max nodal |dtheta|
    double max_ddisp = 0.0;   // max over time of the max nodal ||du||
};

struct RunSummary {
    int n_struct = 0;
    int n_thermal = 0;
    double classification_tolerance = 0.0;
    bool spectra_overlap_nonempty = false;
    double full_transient_seconds = 0.0;
    std::vector<MethodRunSummary> methods;
};

namespace detail {

inline void write_field_snapshot(const std::string& base, FieldFormat format,
                                 const Mesh& mesh, const DofMap& dofs, const Vec& state,
                                 int n_struct, int n_thermal) {
    const int nn = mesh.num_nodes();
    Mat table(nn, 5);
    for (int i = 0; i < nn; ++i) {
        const int sx = dofs.node_to_struct_x[i], sy = dofs.node_to_struct_y[i];
        const int th = dofs.node_to_thermal[i];
        table(i, 0) = mesh.nodes[i].x();
        table(i, 1) = mesh.nodes[i].y();
        table(i, 2) = sx >= 0 ? state[sx] : 0.0;
        table(i, 3) = sy >= 0 ? state[sy] : 0.0;
        table(i, 4) = th >= 0 ? state[2 * n_struct + th] : 0.0;
    }
    (void)n_thermal;
    if (format == FieldFormat::npy) {
        write_npy(base + ".npy", table);
        return;
    }
    std::ofstream out(base + ".csv");
    out << "node,x_m,y_m,ux_m,uy_m,theta_k\n";
    for (int i = 0; i < nn; ++i) {
        out << i;
        for (int c = 0; c < 5; ++c) out << "," << fmt_g17(table(i, c));
        out << "\n";
    }
}

}  // namespace detail

// Full pipeline for one scenario: assemble, build the symmetric state-space
// form, run every configured reduction, compute eigenvalue errors and
// spectra, integrate full and reduced transients, and write the report files
// into cfg.output.directory.
inline RunSummary run_scenario(const ScenarioConfig& cfg, const std::string& config_dump = "") {
    namespace fs = std::filesystem;
    const fs::path out_dir(cfg.output.directory);
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "fields");

    const Mesh mesh = build_scenario_mesh(cfg);
    const DofMap dofs = build_dof_map(mesh, cfg.boundary);
    const CoupledSecondOrderModel model = assemble_system(mesh, cfg.material, dofs);
    const SymStateSpaceModel ssm = to_state_space(model);

    RunSummary summary;
    summary.n_struct = model.n_struct();
    summary.n_thermal = model.n_thermal();

    // Reduction constructions, individually timed (Table-1 shape). The
    // superposition method computes its own coupled eigensolution: that cost
    // is the point of the comparison.
    std::vector<std::pair<ReductionMethod, ReducedStateSpaceModel>> reduced;
    for (ReductionMethod m : cfg.methods) {
        const auto t0 = std::chrono::steady_clock::now();
        ReducedStateSpaceModel r;
        switch (m) {
            case ReductionMethod::uncoupled:
                r = reduce_uncoupled(model, cfg.n_struct_modes, cfg.n_thermal_modes);
                break;
            case ReductionMethod::two_step:
                r = reduce_two_step(model, cfg.n_struct_modes, cfg.n_thermal_modes);
                break;
            case ReductionMethod::superposition:
                r = reduce_mode_superposition(ssm, cfg.n_struct_modes, cfg.n_thermal_modes);
                break;
        }
        MethodRunSummary ms;
        ms.method = m;
        ms.construction_seconds = detail::seconds_since(t0);
        summary.methods.push_back(std::move(ms));
        reduced.emplace_back(m, std::move(r));
    }

    // Full spectrum, classification, per-method eigenvalue errors.
    const ComplexEigenSet full_eig = full_eigensolution(ssm, false);
    const ClassifiedSpectrum full_cs = classify(full_eig, model.n_thermal());
    summary.classification_tolerance = full_cs.tolerance_used;

    std::ofstream errors_csv(out_dir / "eigen_errors.csv");
    errors_csv << "method,class,index,full_re,full_im,reduced_re,reduced_im,rel_error\n";
    std::vector<std::pair<std::string, ClassifiedSpectrum>> spectra_models;
    spectra_models.emplace_back("full", full_cs);

    for (size_t i = 0; i < reduced.size(); ++i) {
        const auto& [m, r] = reduced[i];
        const ComplexEigenSet red_eig = reduced_eigensolution(r, false);
        const ClassifiedSpectrum red_cs = classify(red_eig, r.n_thermal_modes);
        spectra_models.emplace_back(method_name(m), red_cs);
        const ErrorReport report = relative_errors(full_cs, red_cs);
        summary.methods[i].errors = report;
        for (int k = 0; k < report.thermal_tracked; ++k)
            errors_csv << method_name(m) << ",thermal," << k << ","
                       << detail::fmt_g17(full_cs.thermal[k]) << ",0,"
                       << detail::fmt_g17(red_cs.thermal[k]) << ",0,"
                       << detail::fmt_g17(report.thermal_errors[k]) << "\n";
        for (int k = 0; k < report.structural_tracked; ++k)
            errors_csv << method_name(m) << ",structural," << k << ","
                       << detail::fmt_g17(full_cs.structural[k].real()) << ","
                       << detail::fmt_g17(full_cs.structural[k].imag()) << ","
                       << detail::fmt_g17(red_cs.structural[k].real()) << ","
                       << detail::fmt_g17(red_cs.structural[k].imag()) << ","
                       << detail::fmt_g17(report.structural_errors[k]) << "\n";
    }
    errors_csv.close();

    const auto spectra = spectra_report(spectra_models);
    summary.spectra_overlap_nonempty = spectra.front().overlap_nonempty;
    {
        std::ofstream csv(out_dir / "spectra.csv");
        csv << "model,class,index,abs_mu\n";
        for (const auto& entry : spectra) {
            for (int k = 0; k < entry.thermal_abs.size(); ++k)
                csv << entry.label << ",thermal," << k << ","
                    << detail::fmt_g17(entry.thermal_abs[k]) << "\n";
            for (int k = 0; k < entry.structural_abs.size(); ++k)
                csv << entry.label << ",structural," << k << ","
                    << detail::fmt_g17(entry.structural_abs[k]) << "\n";
        }
    }

    // Transients: full model then each reduced model on the same sample grid.
    if (cfg.run_transient) {
        const LoadModel load = build_load_model(cfg.excitation, mesh, dofs, ssm);
        IntegratorOptions opts;
        opts.rel_tol = cfg.integrator.rel_tol;
        opts.abs_tol = cfg.integrator.abs_tol;
        opts.fixed_step = cfg.integrator.fixed_step;
        opts.fixed_dt = cfg.integrator.fixed_dt;

        const auto t_full0 = std::chrono::steady_clock::now();
        const TransientResult full_tr =
            integrate(ssm, load, Vec::Zero(ssm.dim()), 0.0, cfg.integrator.t_end,
                      cfg.integrator.samples, opts);
        summary.full_transient_seconds = detail::seconds_since(t_full0);

        std::ofstream tmax(out_dir / "transient_max.csv");
        tmax << "model,t_s,max_theta_k,max_disp_m\n";
        for (int s = 0; s < full_tr.times.size(); ++s)
            tmax << "full," << detail::fmt_g17(full_tr.times[s]) << ","
                 << detail::fmt_g17(full_tr.max_theta[s]) << ","
                 << detail::fmt_g17(full_tr.max_disp[s]) << "\n";

        // Snapshot sample indices closest to the configured times.
        std::vector<int> snap_idx;
        for (double ts : cfg.output.field_snapshot_times) {
            int best = 0;
            for (int s = 1; s < full_tr.times.size(); ++s)
                if (std::abs(full_tr.times[s] - ts) < std::abs(full_tr.times[best] - ts))
                    best = s;
            snap_idx.push_back(best);
        }
        for (size_t k = 0; k < snap_idx.size(); ++k)
            detail::write_field_snapshot(
                (out_dir / "fields" / ("full_t" + std::to_string(k))).string(),
                cfg.output.field_format, mesh, dofs, full_tr.states.row(snap_idx[k]).transpose(),
                model.n_struct(), model.n_thermal());

        for (size_t i = 0; i < reduced.size(); ++i) {
            const auto& [m, r] = reduced[i];
            const auto t0 = std::chrono::steady_clock::now();
            const TransientResult red_tr =
                integrate(r, load, Vec::Zero(r.dim()), 0.0, cfg.integrator.t_end,
                          cfg.integrator.samples, opts);
            summary.methods[i].transient_seconds = detail::seconds_since(t0);

            const FieldDifference fd = field_difference(full_tr, red_tr, r);
            summary.methods[i].max_dtheta = fd.max_dtheta.size() ? fd.max_dtheta.maxCoeff() : 0.0;
            summary.methods[i].max_ddisp = fd.max_disp.size() ? fd.max_disp.maxCoeff() : 0.0;

            const Mat rec = reconstruct(r, red_tr.states);
            for (int s = 0; s < red_tr.times.size(); ++s) {
                double mt, md;
                field_maxima(rec.row(s).transpose(), model.n_struct(), model.n_thermal(), mt, md);
                tmax << method_name(m) << "," << detail::fmt_g17(red_tr.times[s]) << ","
                     << detail::fmt_g17(mt) << "," << detail::fmt_g17(md) << "\n";
            }
            for (size_t k = 0; k < snap_idx.size(); ++k) {
                detail::write_field_snapshot(
                    (out_dir / "fields" /
                     (std::string(method_name(m)) + "_t" + std::to_string(k)))
                        .string(),
                    cfg.output.field_format, mesh, dofs, rec.row(snap_idx[k]).transpose(),
                    model.n_struct(), model.n_thermal());
                const Vec diff =
                    (full_tr.states.row(snap_idx[k]) - rec.row(snap_idx[k])).transpose();
                detail::write_field_snapshot(
                    (out_dir / "fields" /
                     ("diff_" + std::string(method_name(m)) + "_t" + std::to_string(k)))
                        .string(),
                    cfg.output.field_format, mesh, dofs, diff, model.n_struct(),
                    model.n_thermal());
            }
        }
    }

    // timings.json: methods ordered by construction time; the expected
    // Table-1 pattern is informational (machine dependent), never an error.
    {
        std::vector<size_t> order(summary.methods.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return summary.methods[a].construction_seconds <
                   summary.methods[b].construction_seconds;
        });
        nlohmann::json jt;
        jt["methods"] = nlohmann::json::array();
        for (size_t i : order) {
            nlohmann::json je;
            je["name"] = method_name(summary.methods[i].method);
            je["construction_seconds"] = summary.methods[i].construction_seconds;
            je["transient_seconds"] = summary.methods[i].transient_seconds;
            jt["methods"].push_back(je);
        }
        double t_unc = -1, t_two = -1, t_sup = -1;
        for (const auto& ms : summary.methods) {
            if (ms.method == ReductionMethod::uncoupled) t_unc = ms.construction_seconds;
            if (ms.method == ReductionMethod::two_step) t_two = ms.construction_seconds;
            if (ms.method == ReductionMethod::superposition) t_sup = ms.construction_seconds;
        }
        std::string verdict = "pass";
        if (t_unc >= 0 && t_two >= 0 && t_sup >= 0) {
            if (!(t_unc <= t_two && t_two <= t_sup)) verdict = "warn";
        } else if (t_unc >= 0 && t_two >= 0 && t_unc > t_two) {
            verdict = "warn";
        }
        jt["expected_ordering"] = verdict;
        jt["full_transient_seconds"] = summary.full_transient_seconds;
        std::ofstream out(out_dir / "timings.json");
        out << jt.dump(2) << "\n";
    }

    // manifest.json: deterministic provenance of the run.
    {
        nlohmann::json jm;
        jm["scenario"] = cfg.name;
        jm["version"] = version_string;
        jm["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
        jm["config_hash"] = detail::fnv1a(config_dump);
        jm["n_struct"] = summary.n_struct;
        jm["n_thermal"] = summary.n_thermal;
        jm["state_dim"] = 2 * summary.n_struct + summary.n_thermal;
        jm["classification_tolerance"] = summary.classification_tolerance;
        std::ofstream out(out_dir / "manifest.json");
        out << jm.dump(2) << "\n";
    }

    return summary;
}

// Assemble-only: exports the constrained global blocks in Matrix Market form.
inline void export_assembled_blocks(const ScenarioConfig& cfg, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const Mesh mesh = build_scenario_mesh(cfg);
    const DofMap dofs = build_dof_map(mesh, cfg.boundary);
    const CoupledSecondOrderModel model = assemble_system(mesh, cfg.material, dofs);
    write_matrix_market(dir + "/M_ss.mtx", model.mass, true);
    write_matrix_market(dir + "/K_ss.mtx", model.stiffness, true);
    write_matrix_market(dir + "/Dhat_TT.mtx", model.thermal_capacity, true);
    write_matrix_market(dir + "/Khat_TT.mtx", model.thermal_conductivity, true);
    write_matrix_market(dir + "/K_sT.mtx", model.coupling, false);
}

// Spectra-only: full coupled eigenvalues with classification, as CSV.
inline void export_eigenvalues(const ScenarioConfig& cfg, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const Mesh mesh = build_scenario_mesh(cfg);
    const DofMap dofs = build_dof_map(mesh, cfg.boundary);
    const CoupledSecondOrderModel model = assemble_system(mesh, cfg.material, dofs);
    const SymStateSpaceModel ssm = to_state_space(model);
    const ComplexEigenSet eig = full_eigensolution(ssm, false);
    const ClassifiedSpectrum cs = classify(eig, model.n_thermal());

    std::ofstream csv(dir + "/eigenvalues.csv");
    csv << "index,re,im,class\n";
    for (int i = 0; i < eig.count(); ++i) {
        const Complex mu = eig.values[i];
        const bool is_thermal = detail::is_real_at(mu, cs.tolerance_used);
        csv << i << "," << detail::fmt_g17(mu.real()) << "," << detail::fmt_g17(mu.imag())
            << "," << (is_thermal ? "thermal" : "structural") << "\n";
    }
}

}  // namespace thermomodal
