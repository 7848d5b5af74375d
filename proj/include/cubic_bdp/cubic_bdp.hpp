#ifndef CUBIC_BDP_CUBIC_BDP_HPP
#define CUBIC_BDP_CUBIC_BDP_HPP

#include "cubic_bdp/asymptotics.hpp"
#include "cubic_bdp/extrapolation.hpp"
#include "cubic_bdp/generating_series.hpp"
#include "cubic_bdp/io.hpp"
#include "cubic_bdp/nevanlinna.hpp"
#include "cubic_bdp/parallel.hpp"
#include "cubic_bdp/polynomials.hpp"
#include "cubic_bdp/processes.hpp"
#include "cubic_bdp/quadrature.hpp"
#include "cubic_bdp/spectral.hpp"
#include "cubic_bdp/special_functions.hpp"
#include "cubic_bdp/truncated_series.hpp"

#endif  // CUBIC_BDP_CUBIC_BDP_HPP
