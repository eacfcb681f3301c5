#pragma once

#include "cvx/convex_distance.hpp"
#include "cvx/counting_oracle.hpp"
#include "cvx/discrete_function.hpp"
#include "cvx/function_io.hpp"
#include "cvx/generators.hpp"
#include "cvx/harness.hpp"
#include "cvx/rational.hpp"
#include "cvx/rng.hpp"
#include "cvx/testers.hpp"
