#pragma once
// Thin FFTW wrapper: in-place 3D c2c transforms with one cached plan per (n, direction).

#include <complex>
#include <cstddef>

namespace nswp::fft {

// x <- sum_j x_j exp(-2 pi i jk/n), unnormalised
void forward(std::complex<double>* x, int n);
// x <- sum_k x_k exp(+2 pi i jk/n), unnormalised
void backward(std::complex<double>* x, int n);

const char* library_version();

}  // namespace nswp::fft
