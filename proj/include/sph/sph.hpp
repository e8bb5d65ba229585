#pragma once

#include "sph/dphi.hpp"
#include "sph/ptwist.hpp"
