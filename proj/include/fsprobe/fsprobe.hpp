#pragma once

/// Umbrella header: the whole library.

#include "fsprobe/errors.hpp"
#include "fsprobe/rng.hpp"
#include "fsprobe/geometry.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/reference.hpp"
#include "fsprobe/testers.hpp"
#include "fsprobe/io.hpp"
#include "fsprobe/harness.hpp"
