#pragma once

#include "errors.hpp"
#include "cgamma.hpp"
#include "quadrature.hpp"
#include "funcspace.hpp"
#include "report.hpp"
#include "realizations.hpp"
#include "whittaker.hpp"
#include "identities.hpp"
#include "intertwiners.hpp"
#include "toda.hpp"
