#pragma once

// Umbrella header: the whole library.

#include "gpe/builders.hpp"
#include "gpe/entropy.hpp"
#include "gpe/errors.hpp"
#include "gpe/experiments.hpp"
#include "gpe/graph.hpp"
#include "gpe/io.hpp"
#include "gpe/ordinal.hpp"
#include "gpe/rng.hpp"
#include "gpe/signals.hpp"
#include "gpe/version.hpp"
#include "gpe/walk.hpp"
