#pragma once

#include "oasp/aisle_graph.hpp"
#include "oasp/bench.hpp"
#include "oasp/instances.hpp"
#include "oasp/solvers.hpp"
