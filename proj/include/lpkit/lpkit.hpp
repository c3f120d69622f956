#pragma once

#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"
#include "lpkit/kernels.hpp"
#include "lpkit/registry.hpp"
#include "lpkit/weights.hpp"
#include "lpkit/multiplier.hpp"
#include "lpkit/squarefn.hpp"
#include "lpkit/sobolev.hpp"
#include "lpkit/conditions.hpp"
#include "lpkit/io.hpp"
