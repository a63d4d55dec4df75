#include "nl4s/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "nl4s/errors.hpp"

namespace nl4s::fft {
namespace {

// FFTW's planner is not reentrant; execution with the new-array interface is.
// FFTW_ESTIMATE keeps plans (and therefore rounding) independent of timing.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }

  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dims, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    long n = 1;
    for (int d : dims) n *= d;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw Error(Errc::InvalidArgument, "fftw could not plan transform");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(const std::vector<int>& dims, Eigen::ArrayXcd& a, int sign) {
  fftw_plan p = cache().get(dims, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace

void forward_inplace(const std::vector<int>& dims, Eigen::ArrayXcd& a) { run(dims, a, FFTW_FORWARD); }

void inverse_inplace(const std::vector<int>& dims, Eigen::ArrayXcd& a) {
  run(dims, a, FFTW_BACKWARD);
  a /= static_cast<double>(a.size());
}

Eigen::ArrayXcd forward(const std::vector<int>& dims, const Eigen::ArrayXcd& in) {
  Eigen::ArrayXcd out = in;
  forward_inplace(dims, out);
  return out;
}

Eigen::ArrayXcd inverse(const std::vector<int>& dims, const Eigen::ArrayXcd& in) {
  Eigen::ArrayXcd out = in;
  inverse_inplace(dims, out);
  return out;
}

}  // namespace nl4s::fft
