#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ancbound {

/// Real-to-complex FFT of a fixed size, backed by FFTW. Buffers are owned by
/// the object so repeated transforms of the same size reuse one plan.
/// An instance is not safe to use from several threads at once; separate
/// instances are.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  // Input shorter than size() is zero-padded.
  std::vector<std::complex<double>> forward(std::span<const double> input);
  // Unnormalized inverse divided by size(), so inverse(forward(x)) == x.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum);

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  double* real_ = nullptr;
  void* complex_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace ancbound
