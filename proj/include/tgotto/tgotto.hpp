#pragma once

#include "tgotto/analytic.hpp"
#include "tgotto/error.hpp"
#include "tgotto/io.hpp"
#include "tgotto/otto.hpp"
#include "tgotto/propagate.hpp"
#include "tgotto/ramp.hpp"
#include "tgotto/spectral.hpp"
#include "tgotto/sta.hpp"
#include "tgotto/thermo.hpp"
#include "tgotto/version.hpp"
