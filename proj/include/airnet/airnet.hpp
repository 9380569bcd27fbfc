#pragma once

// Umbrella header for the airnet library: multizone building airflow as a
// nonlinear pressure network, solved step by step against hourly weather.

#include "airnet/air.hpp"
#include "airnet/engine.hpp"
#include "airnet/linalg.hpp"
#include "airnet/model.hpp"
#include "airnet/network.hpp"
#include "airnet/scenario_io.hpp"
#include "airnet/solver.hpp"
#include "airnet/validation.hpp"
#include "airnet/weather.hpp"
