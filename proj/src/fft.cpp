#include "fchv/fft.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <mutex>

#include "fchv/error.hpp"

namespace fchv {
namespace {

// The FFTW planner is not re-entrant; execution of finished plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int g_threads = 0;

void ensure_threads_initialized() {
  static std::once_flag once;
  std::call_once(once, [] { fftw_init_threads(); });
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void* fft_aligned_alloc(std::size_t bytes) { return fftw_malloc(std::max<std::size_t>(bytes, 1)); }
void fft_aligned_free(void* p) noexcept { fftw_free(p); }

void set_num_threads(int n) {
  g_threads = n < 1 ? 0 : n;
  if (g_threads > 0) omp_set_num_threads(g_threads);
}

int num_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

struct FftPlans::Impl {
  int dim;
  int n;
  std::size_t real_size;
  std::size_t complex_size;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  double inverse_scale;
};

FftPlans::FftPlans(int dim, int n) : impl_(std::make_unique<Impl>()) {
  impl_->dim = dim;
  impl_->n = n;
  impl_->real_size = 1;
  for (int a = 0; a < dim; ++a) impl_->real_size *= static_cast<std::size_t>(n);
  impl_->complex_size = impl_->real_size / static_cast<std::size_t>(n) * (n / 2 + 1);
  impl_->inverse_scale = 1.0 / static_cast<double>(impl_->real_size);

  std::vector<int> shape(static_cast<std::size_t>(dim), n);
  RealBuffer r(impl_->real_size);
  ComplexBuffer c(impl_->complex_size);

  std::lock_guard lock(planner_mutex());
  ensure_threads_initialized();
  fftw_plan_with_nthreads(num_threads());
  // ESTIMATE keeps the chosen algorithm, and hence the rounding, identical
  // from run to run.
  impl_->r2c = fftw_plan_dft_r2c(dim, shape.data(), r.data(), as_fftw(c.data()), FFTW_ESTIMATE);
  impl_->c2r = fftw_plan_dft_c2r(dim, shape.data(), as_fftw(c.data()), r.data(), FFTW_ESTIMATE);
  if (impl_->r2c == nullptr || impl_->c2r == nullptr) throw Error("FFTW planning failed");
}

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->r2c);
  fftw_destroy_plan(impl_->c2r);
}

void FftPlans::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != impl_->real_size || out.size() != impl_->complex_size)
    throw ContractError("FftPlans::forward: buffer size mismatch");
  // r2c out-of-place leaves the input untouched.
  fftw_execute_dft_r2c(impl_->r2c, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void FftPlans::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != impl_->complex_size || out.size() != impl_->real_size)
    throw ContractError("FftPlans::inverse: buffer size mismatch");
  // c2r destroys its input.
  ComplexBuffer scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(impl_->c2r, as_fftw(scratch.data()), out.data());
  const double s = impl_->inverse_scale;
  const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] *= s;
}

std::vector<Complex> fft_forward_1d(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  RealBuffer in(samples.begin(), samples.end());
  ComplexBuffer out(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), as_fftw(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return {out.begin(), out.end()};
}

std::vector<double> fft_inverse_1d(std::span<const Complex> coeffs, std::size_t n) {
  if (coeffs.size() != n / 2 + 1) throw ContractError("fft_inverse_1d: size mismatch");
  ComplexBuffer in(coeffs.begin(), coeffs.end());
  RealBuffer out(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(in.data()), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> result(out.begin(), out.end());
  for (auto& x : result) x /= static_cast<double>(n);
  return result;
}

}  // namespace fchv
