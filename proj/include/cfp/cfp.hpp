#pragma once

#include "cfp/types.hpp"
#include "cfp/rng.hpp"
#include "cfp/kernels.hpp"
#include "cfp/core.hpp"
#include "cfp/config_io.hpp"
#include "cfp/solvers.hpp"
#include "cfp/oracle.hpp"
#include "cfp/generators.hpp"
#include "cfp/bench.hpp"
