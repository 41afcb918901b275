#pragma once

// Everything except the JSON layer (tc/report.hpp), which pulls in json.hpp.

#include "tc/canon.hpp"
#include "tc/certify.hpp"
#include "tc/charpoly.hpp"
#include "tc/decomp.hpp"
#include "tc/intmath.hpp"
#include "tc/krylov.hpp"
#include "tc/mat.hpp"
#include "tc/numtheory.hpp"
#include "tc/packed.hpp"
#include "tc/poly.hpp"
#include "tc/ring.hpp"
