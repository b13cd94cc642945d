"""Jacobi-type pencils of matrices and their associated polynomials."""
