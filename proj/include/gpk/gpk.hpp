#pragma once

#include "gpk/capacity.hpp"
#include "gpk/conditioning.hpp"
#include "gpk/credal.hpp"
#include "gpk/document.hpp"
#include "gpk/errors.hpp"
#include "gpk/kinematics.hpp"
#include "gpk/lab.hpp"
#include "gpk/lattice.hpp"
#include "gpk/lp.hpp"
#include "gpk/measure.hpp"
#include "gpk/properties.hpp"
#include "gpk/rational.hpp"
