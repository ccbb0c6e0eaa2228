#pragma once

#include "fracvar/error.hpp"
#include "fracvar/estimators.hpp"
#include "fracvar/fbm.hpp"
#include "fracvar/filter.hpp"
#include "fracvar/harness.hpp"
#include "fracvar/io.hpp"
#include "fracvar/kernels.hpp"
#include "fracvar/rng.hpp"
#include "fracvar/sde.hpp"
#include "fracvar/variation.hpp"
