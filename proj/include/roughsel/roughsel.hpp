#pragma once

// Attribute-reduction toolkit for classic and neighborhood rough sets:
// granulation primitives, four instrumented forward reducers, a brute-force
// oracle, and a benchmark harness. Header-only; include this or the
// individual headers.

#include "roughsel/data.hpp"
#include "roughsel/granulation.hpp"
#include "roughsel/harness.hpp"
#include "roughsel/lra.hpp"
#include "roughsel/oracle.hpp"
#include "roughsel/reduction.hpp"
#include "roughsel/types.hpp"
