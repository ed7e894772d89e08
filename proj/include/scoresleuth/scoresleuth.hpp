#pragma once

// Umbrella header.

#include "scoresleuth/bundles.hpp"
#include "scoresleuth/errors.hpp"
#include "scoresleuth/experiment.hpp"
#include "scoresleuth/expr.hpp"
#include "scoresleuth/feasibility.hpp"
#include "scoresleuth/folds.hpp"
#include "scoresleuth/interval.hpp"
#include "scoresleuth/io.hpp"
#include "scoresleuth/linear.hpp"
#include "scoresleuth/model.hpp"
#include "scoresleuth/multiclass.hpp"
#include "scoresleuth/oracle.hpp"
#include "scoresleuth/outcome.hpp"
#include "scoresleuth/rational.hpp"
#include "scoresleuth/regression.hpp"
#include "scoresleuth/scores.hpp"
#include "scoresleuth/single.hpp"
#include "scoresleuth/surd.hpp"
