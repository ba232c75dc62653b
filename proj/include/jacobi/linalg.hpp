#pragma once

#include "jacobi/types.hpp"

namespace jacobi::linalg {

/// Canonical symplectic matrix [[0, I], [-I, 0]] of size 2m.
Matrix symplectic_unit(int m);

/// F^T J F for a 2m x k frame.
Matrix omega_gram(const Matrix& frame);

/// Orthonormal basis of the column span, rank decided relative to the largest singular value.
Matrix orthonormal_basis(const Matrix& a, double rel_tol);

/// Orthonormal basis of the orthogonal complement of span(q) for q with orthonormal columns.
Matrix orthogonal_complement(const Matrix& q);

/// Numerical rank with singular values compared against rel_tol * sigma_max.
int numerical_rank(const Matrix& a, double rel_tol);

/// Closest matrix with orthonormal columns (polar factor U V^T).
Matrix polar_factor(const Matrix& a);

/// ||P_a - P_b||_2 between the orthogonal projectors onto two column spans of equal dimension.
double grassmann_distance(const Matrix& a, const Matrix& b);

/// Max of |x^T J y| / (|x| |y|) over distinct column pairs.
double isotropy_defect(const Matrix& frame);

}  // namespace jacobi::linalg
