#pragma once

// Everything except the CLI front end, which additionally needs the vendored
// JSON and argument-parsing headers (include "thetagauss/cli.hpp" for that).

#include "types.hpp"
#include "lattice.hpp"
#include "theta.hpp"
#include "distribution.hpp"
#include "fitting.hpp"
#include "sampler.hpp"
#include "geometry.hpp"
#include "invariants.hpp"
