#pragma once

// Umbrella header.

#include "errors.hpp"
#include "gf.hpp"
#include "poly.hpp"
#include "quotient.hpp"
#include "irreducible.hpp"
#include "laurent.hpp"
#include "matrix.hpp"
#include "parse.hpp"
#include "skew.hpp"
#include "drinfeld.hpp"
#include "explog.hpp"
#include "special_values.hpp"
#include "taelman.hpp"
#include "shtuka.hpp"
#include "json_io.hpp"
