#pragma once

// Convenience umbrella for the whole library.

#include "half_int.hpp"
#include "angular.hpp"
#include "statespace.hpp"
#include "spectral.hpp"
#include "analytic.hpp"
#include "evolution.hpp"
#include "scenarios.hpp"
#include "relaxation.hpp"
#include "selfcheck.hpp"
