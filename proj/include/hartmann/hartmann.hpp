#pragma once

// Umbrella header for the core library. The CLI layer (cli.hpp) is not
// included here because it depends on vendored third-party headers; include
// it explicitly from executable targets that provide those on their path.

#include "hartmann/analytic.hpp"
#include "hartmann/core_model.hpp"
#include "hartmann/format.hpp"
#include "hartmann/nu_engine.hpp"
#include "hartmann/oracle.hpp"
#include "hartmann/poly2.hpp"
#include "hartmann/quadrature.hpp"
#include "hartmann/specfun.hpp"
