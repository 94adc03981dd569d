#pragma once

// Umbrella header for the 2xN separability toolkit.

#include "sep2n/bipartite.hpp"
#include "sep2n/certificate.hpp"
#include "sep2n/decomposer.hpp"
#include "sep2n/errors.hpp"
#include "sep2n/hermitian.hpp"
#include "sep2n/io.hpp"
#include "sep2n/peres2x2.hpp"
#include "sep2n/product_finder.hpp"
#include "sep2n/reduction.hpp"
#include "sep2n/stategen.hpp"
#include "sep2n/tolerance.hpp"
