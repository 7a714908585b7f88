#pragma once

#include "mogpsa/banded.hpp"
#include "mogpsa/beam_fe.hpp"
#include "mogpsa/benchmark.hpp"
#include "mogpsa/csv.hpp"
#include "mogpsa/damage.hpp"
#include "mogpsa/errors.hpp"
#include "mogpsa/eval_cache.hpp"
#include "mogpsa/experiment.hpp"
#include "mogpsa/grid.hpp"
#include "mogpsa/image_point.hpp"
#include "mogpsa/log.hpp"
#include "mogpsa/modal.hpp"
#include "mogpsa/model_io.hpp"
#include "mogpsa/nondominated.hpp"
#include "mogpsa/objective.hpp"
#include "mogpsa/search.hpp"
