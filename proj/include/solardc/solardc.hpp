#pragma once

#include "consolidation.hpp"
#include "errors.hpp"
#include "power_model.hpp"
#include "scenario_io.hpp"
#include "sim_engine.hpp"
#include "solar_model.hpp"
#include "storage_model.hpp"
#include "units.hpp"
