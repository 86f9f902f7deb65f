#pragma once

#include "symbrk/arbreduce.hpp"
#include "symbrk/coloring.hpp"
#include "symbrk/config.hpp"
#include "symbrk/detfinish.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/generators.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/harness.hpp"
#include "symbrk/metrics.hpp"
#include "symbrk/mis.hpp"
#include "symbrk/mm.hpp"
#include "symbrk/pipeline.hpp"
#include "symbrk/rng.hpp"
#include "symbrk/solution.hpp"
#include "symbrk/trace.hpp"
#include "symbrk/verify.hpp"
