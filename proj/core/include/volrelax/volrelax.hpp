#pragma once

#include "volrelax/data.hpp"
#include "volrelax/error.hpp"
#include "volrelax/events.hpp"
#include "volrelax/fitting.hpp"
#include "volrelax/intraday.hpp"
#include "volrelax/optimize.hpp"
#include "volrelax/profiles.hpp"
#include "volrelax/rng.hpp"
#include "volrelax/synth.hpp"
#include "volrelax/timestamp.hpp"
#include "volrelax/tsv.hpp"
