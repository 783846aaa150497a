#pragma once

#include <complex>
#include <vector>

#include "krein/types.hpp"

namespace krein {

/// Eigenvalues of a real square matrix by Hessenberg reduction followed
/// by implicitly shifted (Francis double shift) QR. Sized for the desk
/// scale of this library (n <= ~64); no eigenvectors are accumulated.
std::vector<std::complex<double>> schur_eigenvalues(const Mat& A);

}  // namespace krein
