#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace fchv {

void* fft_aligned_alloc(std::size_t bytes);
void fft_aligned_free(void* p) noexcept;

/// Allocator returning SIMD-aligned storage so that plans created on one
/// buffer can be executed on any other buffer of the same shape.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() noexcept = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fft_aligned_alloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fft_aligned_free(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept {
    return true;
  }
};

using Complex = std::complex<double>;
using RealBuffer = std::vector<double, FftAllocator<double>>;
using ComplexBuffer = std::vector<Complex, FftAllocator<Complex>>;

/// Sets the thread count used by OpenMP kernels and by FFT plans created
/// afterwards. Values < 1 select the OpenMP default.
void set_num_threads(int n);
int num_threads();

/// Real-to-complex transforms on an n-dimensional periodic box of N points
/// per axis. Forward is unnormalized; inverse carries 1/N^dim.
class FftPlans {
 public:
  FftPlans(int dim, int n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(std::span<const double> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-dimensional periodic transforms, used by 1D oracles.
std::vector<Complex> fft_forward_1d(std::span<const double> samples);
std::vector<double> fft_inverse_1d(std::span<const Complex> coeffs, std::size_t n);

}  // namespace fchv
