#pragma once

// Thin FFTW wrapper. Plans are created once per transform size and shared;
// the planner is not thread-safe so creation is serialized, execution is not.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "relsol/error.hpp"

namespace relsol::fft {

using cplx = std::complex<double>;

namespace detail {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
    PlanPair p{fftw_plan_dft_1d(ni, in, out, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(ni, in, out, FFTW_BACKWARD, flags)};
    if (!p.forward || !p.backward) throw Error("FFTW planning failed");
    plans_.emplace(n, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

inline void execute(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out) {
  // FFTW_PRESERVE_INPUT guarantees `in` is not written.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

/// Unnormalized forward DFT: out_k = sum_j in_j exp(-2 pi i jk/N).
inline std::vector<cplx> forward(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  if (in.empty()) return out;
  detail::execute(detail::PlanCache::instance().get(in.size()).forward, in, out);
  return out;
}

/// Inverse DFT including the 1/N factor.
inline std::vector<cplx> inverse(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  if (in.empty()) return out;
  detail::execute(detail::PlanCache::instance().get(in.size()).backward, in, out);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& z : out) z *= scale;
  return out;
}

}  // namespace relsol::fft
