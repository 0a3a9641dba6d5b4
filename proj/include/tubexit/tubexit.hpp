#pragma once

#include "tubexit/bounds.hpp"
#include "tubexit/concentration.hpp"
#include "tubexit/errors.hpp"
#include "tubexit/exit_solver.hpp"
#include "tubexit/geometry.hpp"
#include "tubexit/interpolation.hpp"
#include "tubexit/kernels.hpp"
#include "tubexit/montecarlo.hpp"
#include "tubexit/profile.hpp"
#include "tubexit/quadrature.hpp"
#include "tubexit/serialize.hpp"
