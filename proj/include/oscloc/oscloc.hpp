#pragma once

#include "oscloc/error.hpp"
#include "oscloc/grid_model.hpp"
#include "oscloc/identification.hpp"
#include "oscloc/localization.hpp"
#include "oscloc/noise.hpp"
#include "oscloc/params.hpp"
#include "oscloc/reduction.hpp"
#include "oscloc/report.hpp"
#include "oscloc/scenario.hpp"
#include "oscloc/simulator.hpp"
#include "oscloc/trajectory.hpp"
