#pragma once

#include "mph/complex.hpp"
#include "mph/distance.hpp"
#include "mph/error.hpp"
#include "mph/foliation.hpp"
#include "mph/matching.hpp"
#include "mph/persistence.hpp"
#include "mph/shapes.hpp"
