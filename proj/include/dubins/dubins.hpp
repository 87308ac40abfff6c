#pragma once

#include "common.hpp"
#include "controllers.hpp"
#include "dynamics.hpp"
#include "lyapunov.hpp"
#include "metrics.hpp"
#include "path.hpp"
#include "rk4.hpp"
#include "scenario.hpp"
#include "simulation.hpp"
#include "svg.hpp"
#include "sweep.hpp"
#include "telemetry.hpp"
