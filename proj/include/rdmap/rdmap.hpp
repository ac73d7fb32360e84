#pragma once

// Umbrella header: states, channels, destroyer maps, the three resource
// conditions, monotones, and the acceptance suite.

#include "rdmap/channel.hpp"
#include "rdmap/complex_matrix.hpp"
#include "rdmap/conditions.hpp"
#include "rdmap/defaults.hpp"
#include "rdmap/destroyer.hpp"
#include "rdmap/eig.hpp"
#include "rdmap/error.hpp"
#include "rdmap/io.hpp"
#include "rdmap/monotones.hpp"
#include "rdmap/rng.hpp"
#include "rdmap/state.hpp"
#include "rdmap/suite.hpp"
