#pragma once

// Everything except the command-line front end.

#include "fanrot/errors.hpp"
#include "fanrot/integer.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/refinement.hpp"
#include "fanrot/matrix.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/sharp.hpp"
#include "fanrot/rotation.hpp"
#include "fanrot/dyadic.hpp"
