#pragma once

#include "macgrad/tensor.hpp"

namespace macgrad {

struct SymEig {
    Tensor eigenvalues;   // [n], non-increasing
    Tensor eigenvectors;  // [n x n], column i pairs with eigenvalue i
};

// Full symmetric eigendecomposition by cyclic Jacobi rotations.
//
// Eigenvalues are sorted non-increasing (ties keep the original diagonal
// order). Each eigenvector is signed so that its largest-magnitude entry is
// positive; among equal magnitudes the lowest index decides.
// Throws ContractError when `a` is not symmetric to 1e-9 (relative to its
// largest entry) or larger than 4096.
SymEig sym_eig(const Tensor& a);

// Eigenvalues only, same ordering as sym_eig.
Tensor sym_eigvals(const Tensor& a);

// Solves a x = b by LU with partial pivoting. `b` may be a vector or a matrix.
// Throws SingularMatrixError when a pivot vanishes or the pivot-ratio
// condition estimate exceeds `max_condition`.
Tensor dense_solve(const Tensor& a, const Tensor& b, double max_condition = 1e12);

// Also throws SingularMatrixError when |a|_1 |a^-1|_1 exceeds `max_condition`.
Tensor dense_inverse(const Tensor& a, double max_condition = 1e12);

bool is_symmetric(const Tensor& a, double tol = 1e-9);

// Largest singular value via sym_eig of a^T a (desk-scale only).
double spectral_norm(const Tensor& a);

// Largest eigenvalue of x^T x by power iteration through x, never forming the
// Gram matrix. The returned value is a Rayleigh quotient, hence a lower bound
// on the true eigenvalue; `tol` is the relative change that stops iteration.
double gram_lambda_max(const Tensor& x, double tol = 1e-12, int max_iter = 5000);

}  // namespace macgrad
