#pragma once

#include "rsmorse/qcore.hpp"
#include "rsmorse/combinatorics.hpp"
#include "rsmorse/linalg.hpp"
#include "rsmorse/latticeop.hpp"
#include "rsmorse/dualop.hpp"
#include "rsmorse/polynomials.hpp"
#include "rsmorse/spectral.hpp"
#include "rsmorse/scattering.hpp"
#include "rsmorse/io.hpp"
#include "rsmorse/verify.hpp"
