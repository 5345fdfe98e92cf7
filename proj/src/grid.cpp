#include "kgh/field.hpp"

namespace kgh {

namespace {
std::vector<double> zipped(const RealField& a, const RealField& b, const char* who,
                           double (*op)(double, double)) {
  require_same_grid(a.grid(), b.grid(), who);
  const auto& va = a.values();
  const auto& vb = b.values();
  std::vector<double> out(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) out[i] = op(va[i], vb[i]);
  return out;
}
}  // namespace

RealField operator+(const RealField& a, const RealField& b) {
  return RealField(a.grid(), zipped(a, b, "operator+", [](double x, double y) { return x + y; }));
}

RealField operator-(const RealField& a, const RealField& b) {
  return RealField(a.grid(), zipped(a, b, "operator-", [](double x, double y) { return x - y; }));
}

RealField operator*(double c, const RealField& f) {
  std::vector<double> out(f.values());
  for (double& v : out) v *= c;
  return RealField(f.grid(), std::move(out));
}

RealField pointwise_product(const RealField& a, const RealField& b) {
  return RealField(a.grid(),
                   zipped(a, b, "pointwise_product", [](double x, double y) { return x * y; }));
}

CauchyPair operator+(const CauchyPair& a, const CauchyPair& b) {
  return CauchyPair(a.position + b.position, a.velocity + b.velocity, a.time_stamp);
}

CauchyPair operator-(const CauchyPair& a, const CauchyPair& b) {
  return CauchyPair(a.position - b.position, a.velocity - b.velocity, a.time_stamp);
}

CauchyPair operator*(double c, const CauchyPair& p) {
  return CauchyPair(c * p.position, c * p.velocity, p.time_stamp);
}

}  // namespace kgh
