#pragma once

// Umbrella header for the capacity planning library (HTTP routes excluded).

#include "hoplite/error.hpp"
#include "hoplite/domain.hpp"
#include "hoplite/fileio.hpp"
#include "hoplite/lp_model.hpp"
#include "hoplite/simplex.hpp"
#include "hoplite/quadratic.hpp"
#include "hoplite/assess.hpp"
#include "hoplite/models.hpp"
#include "hoplite/json_io.hpp"
#include "hoplite/report.hpp"
#include "hoplite/tasks.hpp"
#include "hoplite/generate.hpp"
#include "hoplite/session.hpp"
