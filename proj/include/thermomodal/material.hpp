#pragma once

#include <string>

#include "thermomodal/errors.hpp"

namespace thermomodal {

enum class PlaneModel { plane_stress, plane_strain };

// Isotropic thermoelastic constants plus the derived Lame / coupling
// coefficients. Temperatures are absolute (Kelvin); config loading converts
// Celsius explicitly.
struct MaterialProps {
    double youngs_modulus = 0.0;        // E [Pa]
    double poisson_ratio = 0.0;         // nu [-]
    double density = 0.0;               // rho [kg/m^3]
    double thermal_expansion = 0.0;     // alpha [1/K]
    double conductivity = 0.0;          // kappa [W/(m K)]
    double specific_heat = 0.0;         // c_E / rho [J/(K kg)]
    double reference_temperature = 0.0; // T0 [K]
    PlaneModel plane_model = PlaneModel::plane_stress;

    double lame_lambda() const {
        const double E = youngs_modulus, nu = poisson_ratio;
        return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    }

    double lame_mu() const {
        return youngs_modulus / (2.0 * (1.0 + poisson_ratio));
    }

    // Isotropic 3-D thermal stress coefficient alpha (3 lambda + 2 mu).
    double beta_3d() const {
        return thermal_expansion * (3.0 * lame_lambda() + 2.0 * lame_mu());
    }

    // In-plane thermal stress coefficient for the selected 2-D reduction.
    double beta_2d() const {
        const double E = youngs_modulus, nu = poisson_ratio;
        if (plane_model == PlaneModel::plane_stress)
            return thermal_expansion * E / (1.0 - nu);
        return thermal_expansion * E / (1.0 - 2.0 * nu);
    }

    // c_E, heat capacity per unit volume [J/(K m^3)].
    double volumetric_heat_capacity() const {
        return density * specific_heat;
    }

    void validate() const {
        if (!(youngs_modulus > 0.0))
            throw InvalidInputError("material: Young's modulus must be positive");
        if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
            throw InvalidInputError("material: Poisson ratio must be in [0, 0.5)");
        if (!(density > 0.0))
            throw InvalidInputError("material: density must be positive");
        if (!(conductivity > 0.0))
            throw InvalidInputError("material: conductivity must be positive");
        if (!(specific_heat > 0.0))
            throw InvalidInputError("material: specific heat must be positive");
        if (!(reference_temperature > 0.0))
            throw InvalidInputError("material: reference temperature must be positive (Kelvin)");
        if (!(thermal_expansion >= 0.0))
            throw InvalidInputError("material: thermal expansion must be non-negative");
    }
};

inline double celsius_to_kelvin(double c) { return c + 273.15; }

}  // namespace thermomodal
