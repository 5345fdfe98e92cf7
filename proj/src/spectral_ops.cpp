#include "kgh/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgh {

namespace {

[[noreturn]] void reject_nonfinite(const Vec3& xi) {
  std::ostringstream os;
  os << "apply_multiplier: non-finite multiplier value at xi = (" << xi.x << ", " << xi.y << ", "
     << xi.z << ")";
  throw std::invalid_argument(os.str());
}

}  // namespace

SpectrumPtr apply_multiplier(const SpectrumPtr& s, const std::function<double(const Vec3&)>& m) {
  auto out = std::make_shared<SpectrumData>(SpectrumData{s->grid, s->coeff});
  for_each_mode(s->grid, [&](std::int64_t idx, const Vec3& xi, int) {
    const double v = m(xi);
    if (!std::isfinite(v)) reject_nonfinite(xi);
    out->coeff[static_cast<std::size_t>(idx)] *= v;
  });
  return out;
}

RealField apply_multiplier(const RealField& f, const std::function<double(const Vec3&)>& m) {
  return inverse_transform(apply_multiplier(forward_transform(f), m));
}

RealField apply_multiplier_complex(const RealField& f,
                                   const std::function<Complex(const Vec3&)>& m) {
  auto in = forward_transform(f);
  auto out = std::make_shared<SpectrumData>(SpectrumData{in->grid, in->coeff});
  for_each_mode(in->grid, [&](std::int64_t idx, const Vec3& xi, int) {
    const Complex v = m(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) reject_nonfinite(xi);
    out->coeff[static_cast<std::size_t>(idx)] *= v;
  });
  return inverse_transform(out);
}

RealField riesz_potential(const RealField& f, double gamma, RieszDiagnostics* diag) {
  if (!(gamma > 2.0) || !(gamma < 3.0))
    throw std::invalid_argument("riesz_potential: gamma must lie in (2, 3)");
  if (diag) {
    const double l2 = lebesgue_norm(f, 2.0);
    const double L = f.grid().box_length();
    const double mean_mass = std::abs(mean_value(f)) * std::pow(L, 1.5);
    diag->mean_fraction = l2 > 0.0 ? mean_mass / l2 : 0.0;
    diag->flagged = diag->mean_fraction > 1e-10;
  }
  const double e = gamma - 3.0;
  return apply_multiplier(f, [e](const Vec3& xi) {
    const double r2 = xi.norm2();
    return r2 == 0.0 ? 0.0 : std::pow(r2, 0.5 * e);
  });
}

double lebesgue_norm(const RealField& f, double r) {
  if (std::isinf(r)) {
    double mx = 0.0;
    for (double v : f.values()) mx = std::max(mx, std::abs(v));
    return mx;
  }
  if (!(r >= 1.0)) throw std::invalid_argument("lebesgue_norm: r must satisfy r >= 1");
  double acc = 0.0;
  if (r == 2.0) {
    for (double v : f.values()) acc += v * v;
  } else {
    for (double v : f.values()) acc += std::pow(std::abs(v), r);
  }
  return std::pow(acc * f.grid().cell_volume(), 1.0 / r);
}

double sobolev_norm(const RealField& f, double s) {
  auto spec = forward_transform(f);
  const double w = f.grid().mode_weight();
  double acc = 0.0;
  for_each_mode(f.grid(), [&](std::int64_t idx, const Vec3& xi, int mult) {
    acc += mult * std::pow(1.0 + xi.norm2(), s) * std::norm(spec->coeff[static_cast<std::size_t>(idx)]);
  });
  return std::sqrt(acc * w);
}

std::pair<double, double> sobolev_norm(const CauchyPair& p, double s) {
  return {sobolev_norm(p.position, s), sobolev_norm(p.velocity, s - 1.0)};
}

double gradient_l2(const RealField& f) {
  auto spec = forward_transform(f);
  const double w = f.grid().mode_weight();
  double acc = 0.0;
  for_each_mode(f.grid(), [&](std::int64_t idx, const Vec3& xi, int mult) {
    acc += mult * xi.norm2() * std::norm(spec->coeff[static_cast<std::size_t>(idx)]);
  });
  return std::sqrt(acc * w);
}

double inner_product(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const auto& a = f.values();
  const auto& b = g.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * f.grid().cell_volume();
}

double mean_value(const RealField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc / static_cast<double>(f.grid().point_count());
}

SpectrumPtr dealias_truncate(const SpectrumPtr& s) {
  const GridSpec& g = s->grid;
  const int n = g.n();
  const double cut = n / 3.0;
  auto out = std::make_shared<SpectrumData>(SpectrumData{g, s->coeff});
  const int nh = n / 2 + 1;
  std::int64_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const bool zout = std::abs(g.signed_index(iz)) > cut;
    for (int iy = 0; iy < n; ++iy) {
      const bool yout = zout || std::abs(g.signed_index(iy)) > cut;
      for (int ix = 0; ix < nh; ++ix, ++idx) {
        if (yout || ix > cut) out->coeff[static_cast<std::size_t>(idx)] = 0.0;
      }
    }
  }
  return out;
}

RealField dealias_truncate(const RealField& f) {
  return inverse_transform(dealias_truncate(forward_transform(f)));
}

}  // namespace kgh
