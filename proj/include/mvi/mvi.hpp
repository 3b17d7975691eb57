#pragma once

#include "mvi/cantilever.hpp"
#include "mvi/coil.hpp"
#include "mvi/config.hpp"
#include "mvi/errors.hpp"
#include "mvi/report.hpp"
#include "mvi/sweep.hpp"
#include "mvi/switch_network.hpp"
#include "mvi/table_io.hpp"
#include "mvi/units.hpp"
