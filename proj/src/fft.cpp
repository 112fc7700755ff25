#include "qwb/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace qwb {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

Fft::Fft(std::size_t n) : impl_(std::make_unique<Impl>()) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "FFT length must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->n = n;
  impl_->buf = fftw_alloc_complex(n);
  const int len = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_1d(len, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_1d(len, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  std::fill_n(reinterpret_cast<cplx*>(impl_->buf), n, cplx{});
}

Fft::Fft(std::size_t nx, std::size_t ny) : impl_(std::make_unique<Impl>()) {
  if (nx == 0 || ny == 0) throw Error(ErrorCode::InvalidArgument, "FFT extents must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->n = nx * ny;
  impl_->buf = fftw_alloc_complex(impl_->n);
  const int ix = static_cast<int>(nx), iy = static_cast<int>(ny);
  impl_->fwd = fftw_plan_dft_2d(ix, iy, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_2d(ix, iy, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  std::fill_n(reinterpret_cast<cplx*>(impl_->buf), impl_->n, cplx{});
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

std::size_t Fft::size() const noexcept { return impl_->n; }

std::span<cplx> Fft::data() noexcept { return {reinterpret_cast<cplx*>(impl_->buf), impl_->n}; }

std::span<const cplx> Fft::data() const noexcept {
  return {reinterpret_cast<const cplx*>(impl_->buf), impl_->n};
}

void Fft::forward() noexcept { fftw_execute(impl_->fwd); }
void Fft::backward() noexcept { fftw_execute(impl_->bwd); }

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != impl_->n || out.size() != impl_->n) throw Error(ErrorCode::DimMismatch, "FFT buffer size");
  std::copy(in.begin(), in.end(), data().begin());
  forward();
  std::copy(data().begin(), data().end(), out.begin());
}

void Fft::backward(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != impl_->n || out.size() != impl_->n) throw Error(ErrorCode::DimMismatch, "FFT buffer size");
  std::copy(in.begin(), in.end(), data().begin());
  backward();
  std::copy(data().begin(), data().end(), out.begin());
}

}  // namespace qwb
