#pragma once

#include "specloc/types.hpp"

namespace specloc::detail {

struct PivotCounts {
  Index plus = 0;
  Index minus = 0;
  Index zero = 0;
};

// Bunch–Kaufman factorization in place (lower triangle referenced) and sign
// count of the block-diagonal factor. The matrix is overwritten.
PivotCounts bunch_kaufman_inertia(CMatrix& a);
PivotCounts bunch_kaufman_inertia(RMatrix& a);

}  // namespace specloc::detail
