#pragma once

#include "xbandit/bench.hpp"
#include "xbandit/bounds.hpp"
#include "xbandit/core.hpp"
#include "xbandit/distsim.hpp"
#include "xbandit/objective.hpp"
#include "xbandit/partition.hpp"
