#pragma once

// Umbrella header for the research-output derivatives library.

#include "arod/contracts.hpp"
#include "arod/errors.hpp"
#include "arod/ingest_store.hpp"
#include "arod/money.hpp"
#include "arod/pricing.hpp"
#include "arod/roi_index.hpp"
#include "arod/scenario.hpp"
#include "arod/vol_estimator.hpp"
