#pragma once

#include "numerics.hpp"
#include "geometry.hpp"
#include "flow.hpp"
#include "shooting.hpp"
#include "energy.hpp"
#include "classify.hpp"
#include "blowup.hpp"
#include "io.hpp"
