#pragma once

#include "mgwt/bounds_asymptotic.hpp"
#include "mgwt/bounds_finite.hpp"
#include "mgwt/channel.hpp"
#include "mgwt/errors.hpp"
#include "mgwt/matrix.hpp"
#include "mgwt/random.hpp"
#include "mgwt/specfun.hpp"
#include "mgwt/stats.hpp"
#include "mgwt/support.hpp"
#include "mgwt/verify.hpp"
#include "mgwt/version.hpp"
