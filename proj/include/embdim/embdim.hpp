#pragma once

// Umbrella header.

#include "embdim/bounds.hpp"
#include "embdim/descriptor.hpp"
#include "embdim/estimators.hpp"
#include "embdim/models.hpp"
#include "embdim/point_cloud.hpp"
#include "embdim/quadrature.hpp"
#include "embdim/rng.hpp"
#include "embdim/sparse.hpp"
#include "embdim/special.hpp"
