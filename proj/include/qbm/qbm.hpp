#pragma once

// Umbrella header for the qbm library: non-Markovian quantum Brownian
// motion channel on single-mode Gaussian probes, with quantum Fisher
// information for bath-temperature, memory-witness and correlation
// estimation.

#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/coeffs.hpp"
#include "qbm/channel.hpp"
#include "qbm/metrology.hpp"
#include "qbm/scenario.hpp"
#include "qbm/selftest.hpp"
