#pragma once

// Umbrella header.

#include "heislab/base_function.hpp"
#include "heislab/config.hpp"
#include "heislab/correlation.hpp"
#include "heislab/diagnostics.hpp"
#include "heislab/errors.hpp"
#include "heislab/fixed.hpp"
#include "heislab/group.hpp"
#include "heislab/joining.hpp"
#include "heislab/mobius.hpp"
#include "heislab/observables.hpp"
#include "heislab/orbit.hpp"
#include "heislab/skew.hpp"
#include "heislab/verify.hpp"
