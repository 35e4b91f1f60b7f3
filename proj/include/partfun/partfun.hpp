#pragma once

#include "partfun/congruence.hpp"
#include "partfun/cospi.hpp"
#include "partfun/euler.hpp"
#include "partfun/expsum.hpp"
#include "partfun/hrr.hpp"
#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"
