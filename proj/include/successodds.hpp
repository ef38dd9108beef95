#pragma once

#include "successodds/bootstrap.hpp"
#include "successodds/brunner_munzel.hpp"
#include "successodds/builtin_data.hpp"
#include "successodds/coarsen.hpp"
#include "successodds/csv.hpp"
#include "successodds/distribution_spec.hpp"
#include "successodds/effects.hpp"
#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/multigroup.hpp"
#include "successodds/ordered_value.hpp"
#include "successodds/pair_counts.hpp"
#include "successodds/rational.hpp"
#include "successodds/report.hpp"
#include "successodds/sample.hpp"
#include "successodds/stratified.hpp"
#include "successodds/t_distribution.hpp"
