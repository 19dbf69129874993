#pragma once

#include "tzero/bochner.hpp"
#include "tzero/bounds.hpp"
#include "tzero/error.hpp"
#include "tzero/feasible_set.hpp"
#include "tzero/io.hpp"
#include "tzero/overlap.hpp"
#include "tzero/polynomial.hpp"
#include "tzero/spectrum.hpp"
#include "tzero/summation.hpp"
#include "tzero/thermo.hpp"
#include "tzero/zeros.hpp"
