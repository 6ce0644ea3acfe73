#pragma once

// Everything: data ingestion, pools, regions, selectors, statistics, harness.

#include "knora/dataset.hpp"
#include "knora/error.hpp"
#include "knora/experiment.hpp"
#include "knora/folds.hpp"
#include "knora/io/csv.hpp"
#include "knora/io/keel.hpp"
#include "knora/perceptron.hpp"
#include "knora/pool.hpp"
#include "knora/pool_io.hpp"
#include "knora/region.hpp"
#include "knora/report.hpp"
#include "knora/scenario.hpp"
#include "knora/selection.hpp"
#include "knora/stats.hpp"
#include "knora/synthetic.hpp"
