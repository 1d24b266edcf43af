#pragma once
// selfpi.hpp - umbrella header.

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"
#include "selfpi/series.hpp"
#include "selfpi/corrector.hpp"
#include "selfpi/verifier.hpp"
#include "selfpi/dynamics.hpp"
#include "selfpi/bench.hpp"
#include "selfpi/digit_file.hpp"
