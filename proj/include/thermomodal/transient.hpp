#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "thermomodal/core.hpp"
#include "thermomodal/dofmap.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/mesh.hpp"
#include "thermomodal/reduction.hpp"
#include "thermomodal/statespace.hpp"

namespace thermomodal {

enum class ExcitationKind { constant, sinusoid };

struct StructuralExcitation {
    std::string node_set;
    int direction = 1;          // 0 = x, 1 = y
    double amplitude = 0.0;     // N, applied per node in the set
    double angular_frequency = 0.0;
    ExcitationKind kind = ExcitationKind::constant;
};

struct ThermalExcitation {
    std::string node_set;
    double amplitude = 0.0;     // W, applied per node in the set
    double angular_frequency = 0.0;
    ExcitationKind kind = ExcitationKind::constant;
};

struct ExcitationSpec {
    std::vector<StructuralExcitation> structural;
    std::vector<ThermalExcitation> thermal;
};

// Time-separable load f(t) = sum_e g_e(t) w_e with static pattern vectors
// w_e; reduced models reuse the same terms with projected patterns.
struct LoadModel {
    struct Term {
        Vec pattern;
        double angular_frequency = 0.0;
        ExcitationKind kind = ExcitationKind::constant;
    };
    std::vector<Term> terms;
    int dim = 0;

    void sample_into(double t, Vec& f) const {
        f.setZero();
        for (const auto& term : terms) {
            const double g = term.kind == ExcitationKind::sinusoid
                                 ? std::sin(term.angular_frequency * t)
                                 : 1.0;
            f.noalias() += g * term.pattern;
        }
    }

    Vec sample(double t) const {
        Vec f(dim);
        sample_into(t, f);
        return f;
    }

    LoadModel projected(const Mat& T) const {
        LoadModel out;
        out.dim = static_cast<int>(T.cols());
        out.terms.reserve(terms.size());
        for (const auto& term : terms)
            out.terms.push_back({T.transpose() * term.pattern, term.angular_frequency, term.kind});
        return out;
    }
};

// Resolves node sets into state-vector patterns: structural amplitudes in the
// velocity-row slots, -Q/T0 in the thermal slots. Contributions of
// overlapping sets add; entries on constrained DOFs are dropped.
inline LoadModel build_load_model(const ExcitationSpec& spec, const Mesh& mesh,
                                  const DofMap& dofs, const SymStateSpaceModel& ssm) {
    LoadModel lm;
    lm.dim = ssm.dim();
    const int ns = ssm.n_struct;
    for (const auto& ex : spec.structural) {
        LoadModel::Term term;
        term.pattern = Vec::Zero(lm.dim);
        term.angular_frequency = ex.angular_frequency;
        term.kind = ex.kind;
        for (int node : mesh.node_set(ex.node_set)) {
            const int dof = ex.direction == 0 ? dofs.node_to_struct_x[node]
                                              : dofs.node_to_struct_y[node];
            if (dof >= 0) term.pattern[ns + dof] += ex.amplitude;
        }
        lm.terms.push_back(std::move(term));
    }
    for (const auto& ex : spec.thermal) {
        LoadModel::Term term;
        term.pattern = Vec::Zero(lm.dim);
        term.angular_frequency = ex.angular_frequency;
        term.kind = ex.kind;
        for (int node : mesh.node_set(ex.node_set)) {
            const int dof = dofs.node_to_thermal[node];
            if (dof >= 0) term.pattern[2 * ns + dof] += -ssm.inv_T0 * ex.amplitude;
        }
        lm.terms.push_back(std::move(term));
    }
    return lm;
}

// Load vector at one instant (convenience over LoadModel).
inline Vec sample_load(const ExcitationSpec& spec, const Mesh& mesh, const DofMap& dofs,
                       const SymStateSpaceModel& ssm, double t) {
    return build_load_model(spec, mesh, dofs, ssm).sample(t);
}

// Right-hand side d' = A^{-1}(f(t) - B d) with A's block structure factored
// once. At desk scale the propagation matrix E = -A^{-1} B is precomputed
// dense and each load term is pre-solved through A, so an evaluation is one
// dense matvec plus a few axpys; above the dense threshold the per-call
// block-solve path is kept.
struct StateSpaceRhs {
    int dim = 0;
    std::function<void(double, const Vec&, Vec&)> eval;
};

namespace detail {

struct PresolvedTerm {
    Vec pattern;  // A^{-1} w_e
    double angular_frequency;
    ExcitationKind kind;
};

inline void add_load_terms(double t, const std::vector<PresolvedTerm>& terms, Vec& out) {
    for (const auto& term : terms) {
        const double g = term.kind == ExcitationKind::sinusoid
                             ? std::sin(term.angular_frequency * t)
                             : 1.0;
        out.noalias() += g * term.pattern;
    }
}

template <typename SolveA>
StateSpaceRhs make_rhs_dense(int dim, const Mat& B_dense, const LoadModel& load,
                             SolveA&& solve_A) {
    auto E = std::make_shared<Mat>(dim, dim);
    {
        Vec col(dim), sol(dim);
        for (int j = 0; j < dim; ++j) {
            col = -B_dense.col(j);
            solve_A(col, sol);
            E->col(j) = sol;
        }
    }
    auto terms = std::make_shared<std::vector<PresolvedTerm>>();
    terms->reserve(load.terms.size());
    Vec sol(dim);
    for (const auto& term : load.terms) {
        solve_A(term.pattern, sol);
        terms->push_back({sol, term.angular_frequency, term.kind});
    }
    StateSpaceRhs rhs;
    rhs.dim = dim;
    rhs.eval = [E, terms](double t, const Vec& y, Vec& out) {
        out.noalias() = (*E) * y;
        add_load_terms(t, *terms, out);
    };
    return rhs;
}

}  // namespace detail

// Sparse path: B stays sparse, A is applied through the three block
// factorizations. This beats a precomputed dense propagation matrix at FE
// scale because A^{-1} B fill destroys the sparsity.
inline StateSpaceRhs make_rhs(const SymStateSpaceModel& ssm, const LoadModel& load) {
    auto chol_K = std::make_shared<Eigen::SimplicialLLT<SpMat>>(ssm.stiffness);
    auto chol_M = std::make_shared<Eigen::SimplicialLLT<SpMat>>(ssm.mass);
    auto chol_D = std::make_shared<Eigen::SimplicialLLT<SpMat>>(ssm.thermal_capacity);
    if (chol_K->info() != Eigen::Success || chol_M->info() != Eigen::Success ||
        chol_D->info() != Eigen::Success)
        throw InvalidModelError("make_rhs: singular A block");
    const int ns = ssm.n_struct, nt = ssm.n_thermal;

    auto B = std::make_shared<SpMat>(ssm.B);
    auto terms = std::make_shared<LoadModel>(load);
    auto buf = std::make_shared<Vec>(ssm.dim());
    StateSpaceRhs rhs;
    rhs.dim = ssm.dim();
    rhs.eval = [B, terms, chol_K, chol_M, chol_D, ns, nt, buf](double t, const Vec& y,
                                                               Vec& out) {
        Vec& f = *buf;
        terms->sample_into(t, f);
        f.noalias() -= (*B) * y;
        out.resize(2 * ns + nt);
        out.head(ns) = -chol_K->solve(f.head(ns).eval());
        out.segment(ns, ns) = chol_M->solve(f.segment(ns, ns).eval());
        out.tail(nt) = -chol_D->solve(f.tail(nt).eval());
    };
    return rhs;
}

// Reduced systems are small; always the dense path. The load is the full
// load model, projected through T.
inline StateSpaceRhs make_rhs(const ReducedStateSpaceModel& r, const LoadModel& full_load) {
    auto lu = std::make_shared<Eigen::PartialPivLU<Mat>>(r.A);
    auto solve_A = [lu](const Vec& rhs_vec, Vec& x) { x = lu->solve(rhs_vec); };
    return detail::make_rhs_dense(r.dim(), r.B, full_load.projected(r.T), solve_A);
}

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-11;
    bool fixed_step = false;
    double fixed_dt = 0.0;
    long max_steps = 500000000L;
};

struct TransientResult {
    Vec times;
    Mat states;      // samples x dim, in the coordinates of the integrated system
    Vec max_theta;   // filled when field dimensions are known (full coordinates)
    Vec max_disp;
    long steps = 0;
    long rejects = 0;
};

// Per-sample max |theta| and max nodal ||u|| of a full-coordinate state.
inline void field_maxima(const Vec& state, int n_struct, int n_thermal,
                         double& max_theta, double& max_disp) {
    max_theta = n_thermal > 0
                    ? state.segment(2 * n_struct, n_thermal).cwiseAbs().maxCoeff()
                    : 0.0;
    max_disp = 0.0;
    for (int i = 0; i + 1 < n_struct; i += 2) {
        const double ux = state[i], uy = state[i + 1];
        max_disp = std::max(max_disp, std::hypot(ux, uy));
    }
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (error weights), b*7 = 1/40
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
    static constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
    static constexpr double e4 = 125.0 / 192 - 393.0 / 640;
    static constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
    static constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
    static constexpr double e7 = -1.0 / 40;
};

}  // namespace detail

// Adaptive Dormand-Prince 4(5) (or fixed-step classical RK4) for
// A d' + B d = f(t). Steps are clamped onto the requested sample times, so
// the result rows are the solution at exactly those instants.
inline TransientResult integrate(const StateSpaceRhs& ops, const Vec& d0, double t0,
                                 double t1, int n_samples,
                                 const IntegratorOptions& opts = {},
                                 int field_n_struct = 0, int field_n_thermal = 0) {
    if (!(t1 > t0) || n_samples < 2)
        throw InvalidInputError("integrate: need t1 > t0 and at least two samples");
    if (d0.size() != ops.dim)
        throw DimensionError("integrate: initial state dimension mismatch");

    const int n = ops.dim;
    TransientResult result;
    result.times.resize(n_samples);
    result.states.resize(n_samples, n);
    const bool track_fields = field_n_struct > 0;
    if (track_fields) {
        result.max_theta.resize(n_samples);
        result.max_disp.resize(n_samples);
    }

    Vec y = d0;
    auto rhs = [&](double t, const Vec& state, Vec& out) { ops.eval(t, state, out); };

    auto record = [&](int s, double t, const Vec& state) {
        result.times[s] = t;
        result.states.row(s) = state.transpose();
        if (track_fields) {
            double mt, md;
            field_maxima(state, field_n_struct, field_n_thermal, mt, md);
            result.max_theta[s] = mt;
            result.max_disp[s] = md;
        }
    };

    record(0, t0, y);

    const double span = t1 - t0;
    const double sample_dt = span / (n_samples - 1);
    double t = t0;
    int next_sample = 1;

    if (opts.fixed_step) {
        const double dt = opts.fixed_dt > 0 ? opts.fixed_dt : sample_dt;
        Vec k1(n), k2(n), k3(n), k4(n), ytmp(n);
        while (next_sample < n_samples) {
            const double t_target = t0 + next_sample * sample_dt;
            double h = std::min(dt, t_target - t);
            rhs(t, y, k1);
            ytmp = y + 0.5 * h * k1;
            rhs(t + 0.5 * h, ytmp, k2);
            ytmp = y + 0.5 * h * k2;
            rhs(t + 0.5 * h, ytmp, k3);
            ytmp = y + h * k3;
            rhs(t + h, ytmp, k4);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            ++result.steps;
            if (t >= t_target - 1e-12 * span) {
                record(next_sample, t_target, y);
                ++next_sample;
            }
            if (result.steps > opts.max_steps)
                throw StiffnessError("integrate: step budget exceeded at t=" + std::to_string(t));
        }
        return result;
    }

    using D = detail::Dopri;
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n), err(n);
    rhs(t, y, k1);
    double h = std::min(sample_dt, 1e-6 * span);
    bool k1_fresh = true;

    while (next_sample < n_samples) {
        const double t_target = t0 + next_sample * sample_dt;
        if (t + h > t_target) h = t_target - t;
        if (!(h > 0)) h = sample_dt * 1e-12;

        if (!k1_fresh) rhs(t, y, k1);
        ytmp = y + h * (D::a21 * k1);
        rhs(t + D::c2 * h, ytmp, k2);
        ytmp = y + h * (D::a31 * k1 + D::a32 * k2);
        rhs(t + D::c3 * h, ytmp, k3);
        ytmp = y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3);
        rhs(t + D::c4 * h, ytmp, k4);
        ytmp = y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4);
        rhs(t + D::c5 * h, ytmp, k5);
        ytmp = y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5);
        rhs(t + h, ytmp, k6);
        y5 = y + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
        rhs(t + h, y5, k7);

        err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);
        double err_norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double scale =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double e = err[i] / scale;
            err_norm += e * e;
        }
        err_norm = std::sqrt(err_norm / n);

        if (err_norm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            k1_fresh = true;
            ++result.steps;
            if (t >= t_target - 1e-12 * span) {
                record(next_sample, t_target, y);
                ++next_sample;
            }
        } else {
            ++result.rejects;
            k1_fresh = true;  // k1 still belongs to (t, y)
        }

        const double factor = err_norm > 0
                                  ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0)
                                  : 5.0;
        h *= factor;
        if (h < 1e-15 * span)
            throw StiffnessError("integrate: step size underflow at t=" + std::to_string(t) +
                                 " after " + std::to_string(result.steps) + " steps, " +
                                 std::to_string(result.rejects) + " rejects");
        if (result.steps + result.rejects > opts.max_steps)
            throw StiffnessError("integrate: step budget exceeded at t=" + std::to_string(t));
    }
    return result;
}

inline TransientResult integrate(const SymStateSpaceModel& ssm, const LoadModel& load,
                                 const Vec& d0, double t0, double t1, int n_samples,
                                 const IntegratorOptions& opts = {}) {
    return integrate(make_rhs(ssm, load), d0, t0, t1, n_samples, opts, ssm.n_struct,
                     ssm.n_thermal);
}

inline TransientResult integrate(const ReducedStateSpaceModel& r, const LoadModel& full_load,
                                 const Vec& d0_reduced, double t0, double t1, int n_samples,
                                 const IntegratorOptions& opts = {}) {
    return integrate(make_rhs(r, full_load), d0_reduced, t0, t1, n_samples, opts);
}

// Per-node differences between a full trajectory and a reconstructed reduced
// one, on a shared sample grid.
struct FieldDifference {
    Vec times;
    Mat dtheta;   // samples x N_T, |delta theta|
    Mat dux;      // samples x (N_s/2)
    Mat duy;
    Vec max_dtheta;  // per-sample global maxima
    Vec max_dux;
    Vec max_duy;
    Vec max_disp;    // per-sample max nodal ||(dux, duy)||
};

inline FieldDifference field_difference(const TransientResult& full,
                                        const TransientResult& reduced,
                                        const ReducedStateSpaceModel& r) {
    if (full.times.size() != reduced.times.size() ||
        (full.times - reduced.times).cwiseAbs().maxCoeff() >
            1e-12 * (full.times[full.times.size() - 1] - full.times[0] + 1.0))
        throw DimensionError("field_difference: sample grids do not match");

    const int ns = r.full_n_struct, nt = r.full_n_thermal;
    const int samples = static_cast<int>(full.times.size());
    const Mat rec = reconstruct(r, reduced.states);
    if (full.states.cols() != rec.cols())
        throw DimensionError("field_difference: state dimensions do not match");

    FieldDifference fd;
    fd.times = full.times;
    fd.dtheta.resize(samples, nt);
    fd.dux.resize(samples, ns / 2);
    fd.duy.resize(samples, ns / 2);
    fd.max_dtheta.resize(samples);
    fd.max_dux.resize(samples);
    fd.max_duy.resize(samples);
    fd.max_disp.resize(samples);

    for (int s = 0; s < samples; ++s) {
        const Vec diff = (full.states.row(s) - rec.row(s)).transpose();
        fd.dtheta.row(s) = diff.segment(2 * ns, nt).cwiseAbs().transpose();
        double max_u = 0.0;
        for (int i = 0; i < ns / 2; ++i) {
            const double dx = diff[2 * i], dy = diff[2 * i + 1];
            fd.dux(s, i) = std::abs(dx);
            fd.duy(s, i) = std::abs(dy);
            max_u = std::max(max_u, std::hypot(dx, dy));
        }
        fd.max_dtheta[s] = nt > 0 ? fd.dtheta.row(s).maxCoeff() : 0.0;
        fd.max_dux[s] = ns > 0 ? fd.dux.row(s).maxCoeff() : 0.0;
        fd.max_duy[s] = ns > 0 ? fd.duy.row(s).maxCoeff() : 0.0;
        fd.max_disp[s] = max_u;
    }
    return fd;
}

}  // namespace thermomodal
