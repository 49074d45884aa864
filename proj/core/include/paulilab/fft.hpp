#pragma once

#include <array>
#include <complex>
#include <memory>

namespace paulilab {

/// In-place 3-D complex FFT for one grid shape, backed by FFTW.
///
/// Plans are created once per shape (creation is serialized) and executed
/// with the new-array interface, so a single plan may be used concurrently
/// on distinct buffers.
class Fft3 {
 public:
  static const Fft3& for_dims(const std::array<int, 3>& dims);

  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  /// Unnormalized forward transform, sign -1.
  void forward(std::complex<double>* data) const;
  /// Inverse transform including the 1/N factor.
  void backward(std::complex<double>* data) const;

  std::size_t size() const { return size_; }

 private:
  explicit Fft3(const std::array<int, 3>& dims);

  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::size_t size_;
};

}  // namespace paulilab
