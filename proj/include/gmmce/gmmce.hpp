#pragma once

// Umbrella header: the full histogram-enhancement library.

#include "gmmce/equalize.hpp"
#include "gmmce/fitting.hpp"
#include "gmmce/gmm.hpp"
#include "gmmce/histogram.hpp"
#include "gmmce/image.hpp"
#include "gmmce/metrics.hpp"
#include "gmmce/pgm.hpp"
#include "gmmce/transform.hpp"
