#pragma once

// Umbrella header: words and substitutions, spectral data, Rauzy fractal
// clouds, the balanced-block intersection morphism, and text/raster I/O.

#include "rauzy/balanced.hpp"
#include "rauzy/errors.hpp"
#include "rauzy/fractal.hpp"
#include "rauzy/io.hpp"
#include "rauzy/raster.hpp"
#include "rauzy/spectral.hpp"
#include "rauzy/word.hpp"
