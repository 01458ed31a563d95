#pragma once

// Everything: algebra, invariant spaces, Nomizu calculus, closed-form
// families, the Einstein solver and the report builders.

#include "berger/algebra.hpp"
#include "berger/einstein.hpp"
#include "berger/equivariance.hpp"
#include "berger/families.hpp"
#include "berger/linalg.hpp"
#include "berger/nomizu.hpp"
#include "berger/quadratic.hpp"
#include "berger/report.hpp"
#include "berger/tensors.hpp"
#include "berger/tolerances.hpp"
