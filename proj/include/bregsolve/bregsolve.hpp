#pragma once

#include "bregsolve/config.hpp"
#include "bregsolve/errors.hpp"
#include "bregsolve/legendre.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/oracle.hpp"
#include "bregsolve/problem.hpp"
#include "bregsolve/projection.hpp"
#include "bregsolve/properties.hpp"
#include "bregsolve/reproduce.hpp"
#include "bregsolve/schedule.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/solver.hpp"
#include "bregsolve/tolerances.hpp"
#include "bregsolve/trace_io.hpp"
