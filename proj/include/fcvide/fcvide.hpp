#pragma once

// Umbrella header: closed-form solver for fuzzy convolution Volterra
// integro-differential equations by the endpoint Laplace-transform method,
// with an independent numeric oracle.

#include "fcvide/errors.hpp"
#include "fcvide/fuzzy.hpp"
#include "fcvide/time_expr.hpp"
#include "fcvide/polynomial.hpp"
#include "fcvide/rational.hpp"
#include "fcvide/roots.hpp"
#include "fcvide/laplace.hpp"
#include "fcvide/problem.hpp"
#include "fcvide/solver.hpp"
#include "fcvide/oracle.hpp"
#include "fcvide/parse.hpp"
#include "fcvide/problem_file.hpp"
#include "fcvide/pretty.hpp"
#include "fcvide/driver.hpp"
