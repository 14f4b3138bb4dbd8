#pragma once

#include "dmbl/error.hpp"
#include "dmbl/evaluator.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/model.hpp"
#include "dmbl/model_io.hpp"
#include "dmbl/parser.hpp"
#include "dmbl/probability.hpp"
#include "dmbl/rational.hpp"
#include "dmbl/rational_fn.hpp"
#include "dmbl/scenarios.hpp"
#include "dmbl/schemata.hpp"
#include "dmbl/stage_set.hpp"
#include "dmbl/task_list.hpp"
#include "dmbl/world_table.hpp"
