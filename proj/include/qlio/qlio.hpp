#pragma once

#include "qlio/benchmarks.hpp"
#include "qlio/error.hpp"
#include "qlio/hypernum.hpp"
#include "qlio/lio.hpp"
#include "qlio/optimizers.hpp"
#include "qlio/random.hpp"
#include "qlio/harness/experiment.hpp"
#include "qlio/harness/records.hpp"
#include "qlio/harness/stats.hpp"
#include "qlio/harness/table.hpp"
