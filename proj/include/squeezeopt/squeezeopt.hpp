#pragma once

#include "types.hpp"
#include "symplectic.hpp"
#include "cayley.hpp"
#include "measure.hpp"
#include "solver.hpp"
#include "gaussian_ops.hpp"
#include "matrix_io.hpp"
#include "random.hpp"
#include "sweep.hpp"
#include "gradcheck.hpp"
