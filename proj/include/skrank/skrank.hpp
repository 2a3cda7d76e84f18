#pragma once

// Umbrella header: top-K realization ranking of stochastically known
// event logs, plus the simulator, measures, codecs and the brute-force
// reference implementation.

#include "skrank/bigint.hpp"
#include "skrank/errors.hpp"
#include "skrank/io.hpp"
#include "skrank/metrics.hpp"
#include "skrank/model.hpp"
#include "skrank/oracle.hpp"
#include "skrank/ranking.hpp"
#include "skrank/simulate.hpp"
#include "skrank/sweep.hpp"
