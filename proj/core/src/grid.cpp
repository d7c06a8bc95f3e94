#include "irb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace irb {

Space Space::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("Lp space needs p in [1, inf)");
  return {Kind::lp, p};
}

Space Space::parse(const std::string& text) {
  if (text == "sup") return sup();
  if (text.rfind("lp(", 0) == 0 && text.back() == ')') {
    const std::string arg = text.substr(3, text.size() - 4);
    std::size_t used = 0;
    const double p = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("bad Lp exponent '" + arg + "'");
    return lp(p);
  }
  throw std::invalid_argument("unknown space '" + text + "' (expected sup or lp(p))");
}

std::string Space::to_string() const {
  if (kind == Kind::sup) return "sup";
  std::ostringstream os;
  os.precision(17);
  os << "lp(" << p << ")";
  return os.str();
}

GridFunction::GridFunction(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("grid function needs at least 2 nodes");
  if (!(lo_ < hi_)) throw std::invalid_argument("grid function needs lo < hi");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
  }
}

GridFunction GridFunction::constant(double lo, double hi, std::size_t n, double v) {
  return GridFunction(lo, hi, std::vector<double>(n, v));
}

double GridFunction::x(std::size_t i) const {
  if (i + 1 == values_.size()) return hi_;
  return lo_ + static_cast<double>(i) * (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

std::vector<double> GridFunction::nodes() const {
  std::vector<double> xs(values_.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

double GridFunction::at(double x) const {
  const double slack = 1e-12 * (hi_ - lo_);
  if (!(x >= lo_ - slack && x <= hi_ + slack)) {
    throw std::out_of_range("grid function evaluated at " + std::to_string(x) + " outside [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  return at_clamped(x);
}

double GridFunction::at_clamped(double x) const {
  const std::size_t n = values_.size();
  const double pos = (std::clamp(x, lo_, hi_) - lo_) / (hi_ - lo_) * static_cast<double>(n - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
  const double frac = pos - static_cast<double>(i);
  if (frac == 0.0) return values_[i];
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && values_.size() == other.values_.size();
}

GridFunction GridFunction::combine(double a, const GridFunction& f, double b, const GridFunction& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("combine: grid mismatch");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
  return GridFunction(f.lo(), f.hi(), std::move(out));
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::fabs(v));
  return m;
}

double p_norm(const GridFunction& f, double p) {
  const auto v = f.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    sum += w * std::pow(std::fabs(v[i]), p);
  }
  return std::pow(sum * f.step(), 1.0 / p);
}

double norm(const GridFunction& f, const Space& space) {
  return space.kind == Space::Kind::sup ? sup_norm(f) : p_norm(f, space.p);
}

double distance(const GridFunction& f, const GridFunction& g, const Space& space) {
  return norm(GridFunction::combine(1.0, f, -1.0, g), space);
}

}  // namespace irb
