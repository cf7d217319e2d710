#pragma once

#include "qdb/gates.hpp"

namespace qdb {

/// Fourier transform on n qubits, |x> -> 2^{-n/2} sum_y exp(2 pi i x y / 2^n) |y>,
/// in the engine's little-endian basis ordering. 1 <= n <= 12.
Circuit build_qft(int n);

/// Adjoint of build_qft(n); applying it after the forward transform is the
/// identity up to 1e-9.
Circuit build_inverse_qft(int n);

} // namespace qdb
