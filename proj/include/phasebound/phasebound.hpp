#pragma once

#include "phasebound/bbound.hpp"
#include "phasebound/engine.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/estimate.hpp"
#include "phasebound/fbound.hpp"
#include "phasebound/linalg.hpp"
#include "phasebound/model.hpp"
#include "phasebound/optimize.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/rbound.hpp"
#include "phasebound/special.hpp"
#include "phasebound/tolerances.hpp"
