#pragma once

#include "specmetric/divergence.hpp"
#include "specmetric/error.hpp"
#include "specmetric/estimation.hpp"
#include "specmetric/geodesic.hpp"
#include "specmetric/grid.hpp"
#include "specmetric/io.hpp"
#include "specmetric/prediction.hpp"
#include "specmetric/spectra.hpp"
