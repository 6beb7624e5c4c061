// Thin FFTW wrapper: per-thread plan cache, deterministic ESTIMATE planning.
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace enscert {

// FFTW planning is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwArray {
 public:
  explicit FftwArray(std::size_t n)
      : n_(n), p_(static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    std::fill(p_, p_ + n_, std::complex<double>(0.0, 0.0));
  }
  ~FftwArray() { fftw_free(p_); }
  FftwArray(const FftwArray&) = delete;
  FftwArray& operator=(const FftwArray&) = delete;

  std::complex<double>* data() { return p_; }
  const std::complex<double>* data() const { return p_; }
  std::complex<double>& operator[](std::size_t i) { return p_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return p_[i]; }
  std::size_t size() const { return n_; }
  void zero() { std::fill(p_, p_ + n_, std::complex<double>(0.0, 0.0)); }

 private:
  std::size_t n_;
  std::complex<double>* p_;
};

// In-place 3D complex transforms on an n^3 cube. Plans are created once with
// FFTW_ESTIMATE (deterministic plan choice) and reused via new-array execute;
// all buffers come from fftw_malloc, so alignment matches the planned one.
class Fft3 {
 public:
  explicit Fft3(int n) : n_(n), scratch_(std::size_t(n) * n * n) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    auto* s = reinterpret_cast<fftw_complex*>(scratch_.data());
    fwd_ = fftw_plan_dft_3d(n, n, n, s, s, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_3d(n, n, n, s, s, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft3() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  int n() const { return n_; }

  // Spectral -> grid (synthesis, e^{+ikx}); unnormalized.
  void backward(FftwArray& a) {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(bwd_, p, p);
  }
  // Grid -> spectral; caller divides by n^3.
  void forward(FftwArray& a) {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(fwd_, p, p);
  }

 private:
  int n_;
  FftwArray scratch_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

inline Fft3& fft_for(int n) {
  thread_local std::map<int, std::unique_ptr<Fft3>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft3>(n);
  return *slot;
}

// Smallest 2,3,5-smooth integer >= n (FFTW-friendly grid sizes).
inline int next_smooth_size(int n) {
  auto smooth = [](int m) {
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    return m == 1;
  };
  while (!smooth(n)) ++n;
  return n;
}

}  // namespace enscert
