#pragma once

#include "scc/bernstein.hpp"
#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/grid_path.hpp"
#include "scc/holder_space.hpp"
#include "scc/json_io.hpp"
#include "scc/modulus.hpp"
#include "scc/orlicz.hpp"
#include "scc/parallel.hpp"
#include "scc/pipeline.hpp"
#include "scc/rng.hpp"
#include "scc/scaling.hpp"
#include "scc/weak_convergence.hpp"
