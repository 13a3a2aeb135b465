#pragma once

#include "slq/dense_eigen.hpp"
#include "slq/errors.hpp"
#include "slq/estimators.hpp"
#include "slq/experiments.hpp"
#include "slq/lanczos.hpp"
#include "slq/linop.hpp"
#include "slq/matrix_market.hpp"
#include "slq/palindrome.hpp"
#include "slq/parallel.hpp"
#include "slq/quadrature.hpp"
#include "slq/rng.hpp"
#include "slq/spectral.hpp"
#include "slq/version.hpp"
