#pragma once

#include "coopsec/capacity.hpp"
#include "coopsec/channel.hpp"
#include "coopsec/design.hpp"
#include "coopsec/error.hpp"
#include "coopsec/montecarlo.hpp"
#include "coopsec/numerics.hpp"
#include "coopsec/rng.hpp"
