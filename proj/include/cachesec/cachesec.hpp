#pragma once

// Umbrella header.

#include "analytic_metrics.hpp"
#include "content_model.hpp"
#include "errors.hpp"
#include "monte_carlo.hpp"
#include "numerics.hpp"
