#pragma once

#include "thermomodal/analysis.hpp"
#include "thermomodal/assembly.hpp"
#include "thermomodal/core.hpp"
#include "thermomodal/dofmap.hpp"
#include "thermomodal/eigensolve.hpp"
#include "thermomodal/element.hpp"
#include "thermomodal/errors.hpp"
#include "thermomodal/material.hpp"
#include "thermomodal/mesh.hpp"
#include "thermomodal/mmio.hpp"
#include "thermomodal/pencil_eig.hpp"
#include "thermomodal/reduction.hpp"
#include "thermomodal/runner.hpp"
#include "thermomodal/scenario.hpp"
#include "thermomodal/statespace.hpp"
#include "thermomodal/transient.hpp"
