#pragma once

#include <vector>

#include "qtrace/core.hpp"

namespace qtrace::linalg {

// log det(A) = log|det A| + i·arg, arg taken as the sum of pivot arguments
// (a valid but unnormalized branch). real part is -inf when A is singular.
cplx log_det(CMat A);

// solves A X = B; A is consumed
CMat solve(CMat A, const CMat& B);

struct EigResult {
  CVec values;
  CMat vectors; // columns, unit 2-norm; empty when not requested
};

EigResult eig(const CMat& A, bool want_vectors);

// reciprocal condition number estimate in the 1-norm
double rcond(const CMat& A);

// minimal-cost assignment; cost is rows × cols with rows <= cols.
// returns the column assigned to each row.
std::vector<int> hungarian(const RMat& cost);

} // namespace qtrace::linalg
