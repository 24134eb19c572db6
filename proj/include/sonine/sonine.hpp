#pragma once

#include "sonine/conv.hpp"
#include "sonine/diagnostics.hpp"
#include "sonine/errors.hpp"
#include "sonine/frac_series.hpp"
#include "sonine/kernel.hpp"
#include "sonine/kernel_spec.hpp"
#include "sonine/laplace.hpp"
#include "sonine/quadrature.hpp"
#include "sonine/series_sonine.hpp"
#include "sonine/specfun.hpp"
