#pragma once

#include "efg/experiment.hpp"
#include "efg/game_tree.hpp"
#include "efg/games.hpp"
#include "efg/learners.hpp"
#include "efg/metrics.hpp"
#include "efg/oracle.hpp"
#include "efg/sampling.hpp"
#include "efg/strategy.hpp"
#include "efg/svg_plot.hpp"
#include "efg/tree_builder.hpp"
#include "efg/values.hpp"
