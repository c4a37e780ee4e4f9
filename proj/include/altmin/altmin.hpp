#pragma once

#include "altmin/altmin_ops.hpp"
#include "altmin/error.hpp"
#include "altmin/h_oracle.hpp"
#include "altmin/measurement.hpp"
#include "altmin/metrics.hpp"
#include "altmin/rng.hpp"
#include "altmin/solver.hpp"
#include "altmin/stats.hpp"
#include "altmin/types.hpp"
