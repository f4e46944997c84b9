#pragma once

#include "heatshift/multiindex.hpp"
#include "heatshift/quadrature.hpp"
#include "heatshift/parallel.hpp"
#include "heatshift/initial_data.hpp"
#include "heatshift/shifts.hpp"
#include "heatshift/kernels.hpp"
#include "heatshift/solution.hpp"
#include "heatshift/analysis.hpp"
