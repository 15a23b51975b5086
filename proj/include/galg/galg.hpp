#pragma once

#include "galg/error.hpp"
#include "galg/polynomial.hpp"
#include "galg/expr.hpp"
#include "galg/parser.hpp"
#include "galg/sampling.hpp"
#include "galg/matrix.hpp"
#include "galg/bundle.hpp"
#include "galg/algebroid.hpp"
#include "galg/bullet.hpp"
#include "galg/numeric.hpp"
#include "galg/control.hpp"
#include "galg/scenario.hpp"
#include "galg/report.hpp"
#include "galg/reflection_example.hpp"
