#pragma once

// Floating catchment area accessibility toolkit: umbrella header.

#include "fca/classify.hpp"
#include "fca/cost_matrix.hpp"
#include "fca/csv.hpp"
#include "fca/demand.hpp"
#include "fca/engine.hpp"
#include "fca/errors.hpp"
#include "fca/geo.hpp"
#include "fca/io.hpp"
#include "fca/model.hpp"
#include "fca/network.hpp"
#include "fca/polygon.hpp"
#include "fca/spatial_index.hpp"
