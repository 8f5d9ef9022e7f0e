#pragma once

#include "lvasym/bootstrap.hpp"
#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"
#include "lvasym/hermite.hpp"
#include "lvasym/io.hpp"
#include "lvasym/kernel.hpp"
#include "lvasym/models.hpp"
#include "lvasym/models_json.hpp"
#include "lvasym/oracles.hpp"
#include "lvasym/payoff.hpp"
#include "lvasym/pricing.hpp"
#include "lvasym/quadrature.hpp"
#include "lvasym/special.hpp"
