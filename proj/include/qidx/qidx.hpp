#pragma once

#include "coeff.hpp"
#include "constructors.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "identities.hpp"
#include "laurent.hpp"
#include "numtheory.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "specialization.hpp"
