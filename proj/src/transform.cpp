#include "kgh/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace kgh {

namespace {

// One r2c/c2r plan pair per grid size, built once behind a mutex.  Plans use
// FFTW_ESTIMATE so the algorithm choice (and hence round-off) is identical
// from run to run, and FFTW_UNALIGNED so they apply to any caller buffer via
// the new-array execute interface.
struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

PlanSet& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, PlanSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::int64_t nreal = static_cast<std::int64_t>(n) * n * n;
  const std::int64_t nspec = static_cast<std::int64_t>(n) * n * (n / 2 + 1);
  double* rbuf = fftw_alloc_real(nreal);
  fftw_complex* cbuf = fftw_alloc_complex(nspec);

  PlanSet p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, rbuf, cbuf, flags);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, cbuf, rbuf, flags);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!p.r2c || !p.c2r) throw std::runtime_error("transform: plan creation failed");
  return cache.emplace(n, p).first->second;
}

double forward_scale(const GridSpec& g) {
  const double h = g.box_length() / g.n();
  return h * h * h * std::pow(2.0 * M_PI, -1.5);
}

}  // namespace

SpectrumPtr forward_transform(const RealField& f) {
  if (f.cached_spectrum()) return f.cached_spectrum();
  const GridSpec& g = f.grid();
  auto out = std::make_shared<SpectrumData>(
      SpectrumData{g, std::vector<Complex>(static_cast<std::size_t>(spectrum_size(g)))});

  // Out-of-place r2c leaves the input intact; the API just lacks const.
  std::vector<double> in(f.values());
  fftw_execute_dft_r2c(plans_for(g.n()).r2c, in.data(),
                       reinterpret_cast<fftw_complex*>(out->coeff.data()));

  const double scale = forward_scale(g);
  for (Complex& c : out->coeff) c *= scale;
  return out;
}

RealField inverse_transform(const SpectrumPtr& s) {
  if (!s) throw std::invalid_argument("inverse_transform: null spectrum");
  const GridSpec& g = s->grid;
  if (static_cast<std::int64_t>(s->coeff.size()) != spectrum_size(g))
    throw std::invalid_argument("inverse_transform: spectrum size mismatch");

  // c2r destroys its input, so run it on a scratch copy scaled such that the
  // round trip inverse(forward(f)) = f: the unnormalized c2r sum carries a
  // factor n^3 against the forward scale.
  std::vector<Complex> scratch(s->coeff);
  const double scale = 1.0 / (forward_scale(g) * static_cast<double>(g.point_count()));
  for (Complex& c : scratch) c *= scale;

  std::vector<double> out(static_cast<std::size_t>(g.point_count()));
  fftw_execute_dft_c2r(plans_for(g.n()).c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  return RealField(g, std::move(out), s);
}

double spectral_sum(const SpectrumData& s,
                    const std::function<double(const Vec3&, const Complex&)>& fn) {
  double acc = 0.0;
  for_each_mode(s.grid, [&](std::int64_t idx, const Vec3& xi, int mult) {
    acc += mult * fn(xi, s.coeff[static_cast<std::size_t>(idx)]);
  });
  return acc;
}

}  // namespace kgh
