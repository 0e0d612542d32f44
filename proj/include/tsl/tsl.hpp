#pragma once

// Umbrella header for the tripod slow-light simulator.

#include "tsl/acceptance.hpp"
#include "tsl/analysis.hpp"
#include "tsl/beams.hpp"
#include "tsl/config.hpp"
#include "tsl/errors.hpp"
#include "tsl/expint.hpp"
#include "tsl/fft.hpp"
#include "tsl/grid.hpp"
#include "tsl/io.hpp"
#include "tsl/medium.hpp"
#include "tsl/propagation.hpp"
#include "tsl/quadrature.hpp"
#include "tsl/scenario.hpp"
#include "tsl/storage.hpp"
