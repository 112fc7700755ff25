#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "qwb/core.hpp"

namespace qwb {

/// In-place complex DFT on an owned, SIMD-aligned buffer. Transforms are
/// unnormalized (backward(forward(x)) == n * x). Plans use estimate-mode
/// planning so results are reproducible bit-for-bit across runs.
class Fft {
 public:
  /// 1D transform of length n.
  explicit Fft(std::size_t n);
  /// 2D transform on a row-major nx-by-ny array (the y index is contiguous).
  Fft(std::size_t nx, std::size_t ny);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept;
  std::span<cplx> data() noexcept;
  std::span<const cplx> data() const noexcept;

  void forward() noexcept;   // Σ_k x_k e^{-2πi jk/n}
  void backward() noexcept;  // Σ_j X_j e^{+2πi jk/n}

  /// Copy-in, transform, copy-out helpers for callers with their own storage.
  void forward(std::span<const cplx> in, std::span<cplx> out);
  void backward(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qwb
