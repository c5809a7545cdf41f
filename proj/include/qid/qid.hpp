#pragma once

// Umbrella header.

#include "qid/errors.hpp"
#include "qid/matrix.hpp"
#include "qid/linalg.hpp"
#include "qid/rng.hpp"
#include "qid/states.hpp"
#include "qid/measurement.hpp"
#include "qid/dilation.hpp"
#include "qid/discrimination.hpp"
#include "qid/tradeoff.hpp"
