#include "paulilab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace paulilab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft3::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft3::Fft3(const std::array<int, 3>& dims)
    : plans_(std::make_unique<Plans>()),
      size_(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]) {
  std::vector<std::complex<double>> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->fwd = fftw_plan_dft_3d(dims[0], dims[1], dims[2], buf, buf,
                                 FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft_3d(dims[0], dims[1], dims[2], buf, buf,
                                 FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) {
    throw std::runtime_error("fftw: plan creation failed");
  }
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
  if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
}

const Fft3& Fft3::for_dims(const std::array<int, 3>& dims) {
  static std::map<std::array<int, 3>, std::unique_ptr<Fft3>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(dims);
  if (it == cache.end()) {
    it = cache.emplace(dims, std::unique_ptr<Fft3>(new Fft3(dims))).first;
  }
  return *it->second;
}

void Fft3::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void Fft3::backward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) data[i] *= scale;
}

}  // namespace paulilab
