#pragma once

#include "bsamp/bounds.hpp"
#include "bsamp/corpus.hpp"
#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"
#include "bsamp/lattice.hpp"
#include "bsamp/quadrature.hpp"
#include "bsamp/reconstruct.hpp"
#include "bsamp/sample_set.hpp"
#include "bsamp/sampleio.hpp"
