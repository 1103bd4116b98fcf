#pragma once

#include "burgers/grid.hpp"

#include <span>

namespace burgers::fft {

/// Real-to-half-complex transform with coefficient normalization
///   out[k] = (1/N) sum_j in[j] exp(-2 pi i k j / N),  k = 0..N/2.
/// Plans are created once per size and shared; execution is thread-safe.
void forward(std::span<const double> in, std::span<Complex> out);

/// Inverse of forward(): in[k], k = 0..N/2, to N real samples. The imaginary
/// parts of in[0] and in[N/2] are ignored.
void inverse(std::span<const Complex> in, std::span<double> out);

}  // namespace burgers::fft
