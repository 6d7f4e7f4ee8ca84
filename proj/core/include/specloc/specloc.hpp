#pragma once

#include "specloc/clifford.hpp"
#include "specloc/invariant.hpp"
#include "specloc/lattice.hpp"
#include "specloc/localizer.hpp"
#include "specloc/models.hpp"
#include "specloc/operators.hpp"
#include "specloc/oracle.hpp"
#include "specloc/signature.hpp"
#include "specloc/symmetry.hpp"
#include "specloc/types.hpp"
