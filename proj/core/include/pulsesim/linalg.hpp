#pragma once

#include <vector>

#include "pulsesim/qobj.hpp"

namespace pulsesim::linalg {

/// Matrix exponential (Pade approximant with scaling and squaring).
Matrix expm(const Matrix& a);

/// exp(-i h t) for Hermitian h, via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

/// Principal square root of a positive semidefinite Hermitian matrix.
Matrix sqrtm_psd(const Matrix& a);

double max_abs(const Matrix& a);

/// Row-major multi-index digits of `index` for subsystem sizes `dims`.
std::vector<int> digits(long index, const std::vector<int>& dims);

}  // namespace pulsesim::linalg
