#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thermomodal/core.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/pencil_eig.hpp"

namespace thermomodal {

// Thermal / structural split of a coupled spectrum. Purely real eigenvalues
// are thermal-dominant; each complex-conjugate pair contributes one
// representative with positive imaginary part to the structural class.
struct ClassifiedSpectrum {
    Vec thermal;               // real values, sorted by |mu| ascending
    CVec structural;           // Im > 0 representatives, sorted by |Im| ascending
    double tolerance_used = 0.0;

    int total_count() const {
        return static_cast<int>(thermal.size()) + 2 * static_cast<int>(structural.size());
    }
};

namespace detail {

inline bool is_real_at(const Complex& mu, double tol) {
    return std::abs(mu.imag()) <= tol * std::abs(mu);
}

}  // namespace detail

// Partitions by the purely-real rule. If the real count misses the expected
// thermal count at the base tolerance, the tolerance widens geometrically
// (x10) up to the cap; a count that still cannot be matched signals a
// genuinely mixed spectrum.
inline ClassifiedSpectrum classify(const ComplexEigenSet& spectrum, int n_thermal_expected,
                                   double base_tolerance = 1e-8, double max_tolerance = 1e-4) {
    double tol = base_tolerance;
    int real_count = -1;
    while (true) {
        real_count = 0;
        for (int i = 0; i < spectrum.count(); ++i)
            if (detail::is_real_at(spectrum.values[i], tol)) ++real_count;
        if (real_count == n_thermal_expected) break;
        if (real_count > n_thermal_expected || tol >= max_tolerance)
            throw ClassificationError(
                "classify: purely-real count " + std::to_string(real_count) +
                " cannot be matched to expected " + std::to_string(n_thermal_expected) +
                " within tolerance " + std::to_string(tol));
        tol *= 10.0;
    }

    std::vector<double> thermal;
    std::vector<Complex> upper, lower;
    for (int i = 0; i < spectrum.count(); ++i) {
        const Complex mu = spectrum.values[i];
        if (detail::is_real_at(mu, tol))
            thermal.push_back(mu.real());
        else if (mu.imag() > 0.0)
            upper.push_back(mu);
        else
            lower.push_back(mu);
    }
    if (upper.size() != lower.size())
        throw ClassificationError("classify: spectrum not closed under conjugation");

    std::sort(thermal.begin(), thermal.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    std::sort(upper.begin(), upper.end(), [](const Complex& a, const Complex& b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });

    ClassifiedSpectrum cs;
    cs.thermal = Eigen::Map<const Vec>(thermal.data(), thermal.size());
    cs.structural.resize(static_cast<int>(upper.size()));
    for (size_t i = 0; i < upper.size(); ++i) cs.structural[static_cast<int>(i)] = upper[i];
    cs.tolerance_used = tol;
    return cs;
}

// Index-wise relative eigenvalue errors |mu_full - mu_reduced| / |mu_full|
// per class after canonical sorting. Tracked counts default to the reduced
// class sizes; pass explicit counts to pin a fixed tracked set (used by the
// nested-convergence checks).
struct ErrorReport {
    Vec thermal_errors;
    Vec structural_errors;
    double max_thermal = 0.0, mean_thermal = 0.0;
    double max_structural = 0.0, mean_structural = 0.0;
    int thermal_tracked = 0, structural_tracked = 0;
};

inline ErrorReport relative_errors(const ClassifiedSpectrum& full,
                                   const ClassifiedSpectrum& reduced,
                                   int n_thermal_track = -1, int n_struct_track = -1) {
    ErrorReport report;
    int nt = std::min<int>(full.thermal.size(), reduced.thermal.size());
    if (n_thermal_track >= 0) nt = std::min(nt, n_thermal_track);
    int ns = std::min<int>(full.structural.size(), reduced.structural.size());
    if (n_struct_track >= 0) ns = std::min(ns, n_struct_track);

    report.thermal_tracked = nt;
    report.structural_tracked = ns;
    report.thermal_errors.resize(nt);
    for (int i = 0; i < nt; ++i)
        report.thermal_errors[i] =
            std::abs(full.thermal[i] - reduced.thermal[i]) / std::abs(full.thermal[i]);
    report.structural_errors.resize(ns);
    for (int i = 0; i < ns; ++i)
        report.structural_errors[i] =
            std::abs(full.structural[i] - reduced.structural[i]) / std::abs(full.structural[i]);

    if (nt > 0) {
        report.max_thermal = report.thermal_errors.maxCoeff();
        report.mean_thermal = report.thermal_errors.mean();
    }
    if (ns > 0) {
        report.max_structural = report.structural_errors.maxCoeff();
        report.mean_structural = report.structural_errors.mean();
    }
    return report;
}

// Absolute-spectrum table: |mu| per class per model plus the thermal vs
// structural range-overlap indicator per model.
struct SpectraEntry {
    std::string label;
    Vec thermal_abs;
    Vec structural_abs;
    double overlap_low = 0.0;
    double overlap_high = 0.0;
    bool overlap_nonempty = false;
};

inline std::vector<SpectraEntry> spectra_report(
    const std::vector<std::pair<std::string, ClassifiedSpectrum>>& models) {
    std::vector<SpectraEntry> out;
    out.reserve(models.size());
    for (const auto& [label, cs] : models) {
        SpectraEntry e;
        e.label = label;
        e.thermal_abs = cs.thermal.cwiseAbs();
        e.structural_abs.resize(cs.structural.size());
        for (int i = 0; i < cs.structural.size(); ++i)
            e.structural_abs[i] = std::abs(cs.structural[i]);
        if (e.thermal_abs.size() > 0 && e.structural_abs.size() > 0) {
            const double tlo = e.thermal_abs.minCoeff(), thi = e.thermal_abs.maxCoeff();
            const double slo = e.structural_abs.minCoeff(), shi = e.structural_abs.maxCoeff();
            e.overlap_low = std::max(tlo, slo);
            e.overlap_high = std::min(thi, shi);
            e.overlap_nonempty = e.overlap_low <= e.overlap_high;
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace thermomodal
