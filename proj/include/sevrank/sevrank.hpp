#pragma once

// Convenience umbrella: pulls in the whole library.

#include "sevrank/benchgen.hpp"
#include "sevrank/data_model.hpp"
#include "sevrank/errors.hpp"
#include "sevrank/league.hpp"
#include "sevrank/multiplicity.hpp"
#include "sevrank/report.hpp"
#include "sevrank/resampling.hpp"
#include "sevrank/sensitivity.hpp"
#include "sevrank/severity.hpp"
#include "sevrank/util.hpp"
#include "sevrank/version.hpp"
