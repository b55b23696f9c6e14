#ifndef ARVESON_MODELS_FLOW_MODELS_HPP
#define ARVESON_MODELS_FLOW_MODELS_HPP

#include <memory>
#include <vector>

#include "arveson/core.hpp"

namespace arveson {

// Scalar flow models: a one-parameter flow acting on formal translates of a
// single base orbit c(t).  Elements are finite combinations
//   A = sum_r coeff_r * (base shifted by shift_r),
// so alpha_x(A) shifts every term and the single evaluation functional reads
// off sum_r coeff_r * c(t + shift_r).  There is no unit and no *-structure;
// these models exist to realize prescribed spectral measure types.
class ScalarFlowModel : public Model {
 public:
  struct Terms {
    std::vector<cd> coeff;
    std::vector<double> shift;
  };

  int group_dim() const override { return 1; }

  Element base_element() const {
    Element e;
    e.model = this;
    auto t = std::make_shared<Terms>();
    t->coeff = {1.0};
    t->shift = {0.0};
    e.payload = std::move(t);
    e.label = "A";
    return e;
  }
  Functional eval_functional() const {
    Functional f;
    f.model = this;
    f.payload = std::make_shared<int>(0);
    f.label = "eval";
    return f;
  }

  virtual cd base_orbit(double t) const = 0;

  cd pair(const Functional& phi, const Element& a,
          const GroupParameter& x) const override {
    (void)phi;
    const auto& terms = *static_cast<const Terms*>(a.payload.get());
    cd acc = 0;
    for (std::size_t r = 0; r < terms.coeff.size(); ++r)
      acc += terms.coeff[r] * base_orbit(x[0] + terms.shift[r]);
    return acc;
  }

  Element translate(const Element& a, const GroupParameter& x) const override {
    auto t = std::make_shared<Terms>(*static_cast<const Terms*>(a.payload.get()));
    for (auto& s : t->shift) s += x[0];
    Element e;
    e.model = this;
    e.payload = std::move(t);
    e.label = a.label;
    return e;
  }
  Element combine(cd ca, const Element& a, cd cb, const Element& b) const override {
    auto t = std::make_shared<Terms>();
    const auto& ta = *static_cast<const Terms*>(a.payload.get());
    const auto& tb = *static_cast<const Terms*>(b.payload.get());
    for (std::size_t r = 0; r < ta.coeff.size(); ++r) {
      t->coeff.push_back(ca * ta.coeff[r]);
      t->shift.push_back(ta.shift[r]);
    }
    for (std::size_t r = 0; r < tb.coeff.size(); ++r) {
      t->coeff.push_back(cb * tb.coeff[r]);
      t->shift.push_back(tb.shift[r]);
    }
    Element e;
    e.model = this;
    e.payload = std::move(t);
    return e;
  }

  std::vector<Element> generator_elements() const override { return {base_element()}; }
  std::vector<Functional> functional_family() const override { return {eval_functional()}; }
};

// Absolutely continuous reference: spectral density is a normalized Gaussian
// with the given mean and width, so the base orbit is the closed form
//   c(t) = exp(i * mean * t) * exp(-(sigma * t)^2 / 2),  c(0) = 1.
class DensityFlowModel final : public ScalarFlowModel {
 public:
  explicit DensityFlowModel(double mean = 2.0, double sigma = 1.0)
      : mean_(mean), sigma_(sigma) {
    if (!(sigma > 0)) throw InvalidConfig("density flow: sigma must be positive");
  }

  double mean() const { return mean_; }
  double sigma() const { return sigma_; }
  double density(double p) const {
    const double u = (p - mean_) / sigma_;
    return std::exp(-0.5 * u * u) / (sigma_ * std::sqrt(kTwoPi));
  }

  std::string name() const override { return "gaussian-flow"; }
  std::vector<double> max_frequency() const override { return {mean_ + 8 * sigma_}; }
  cd base_orbit(double t) const override {
    const double u = sigma_ * t;
    return std::polar(std::exp(-0.5 * u * u), mean_ * t);
  }

 private:
  double mean_, sigma_;
};

// Singular continuous reference: the Riesz product measure of the classical
// middle-thirds construction, whose Fourier transform is
//   c(t) = prod_{k>=1} cos(ratio^k * t).
// Factors with (ratio^k * T)^2 / 2 < 1e-14 are identically 1 on |t| <= T to
// machine precision, so the product is truncated there (depth chosen from the
// declared maximum window).
class RieszProductModel final : public ScalarFlowModel {
 public:
  explicit RieszProductModel(double ratio = 1.0 / 3.0, double max_window = 2.5e4)
      : ratio_(ratio), max_window_(max_window) {
    if (!(ratio > 0 && ratio < 1)) throw InvalidConfig("riesz product: ratio outside (0,1)");
    if (!(max_window > 1)) throw InvalidConfig("riesz product: max window too small");
    depth_ = 1;
    while (std::pow(ratio_, depth_) * max_window_ > 1.4e-7) ++depth_;
  }

  int depth() const { return depth_; }

  std::string name() const override { return "riesz-product-flow"; }
  std::vector<double> max_frequency() const override {
    // Frequencies are sums of +-ratio^k, bounded by ratio / (1 - ratio).
    return {ratio_ / (1 - ratio_)};
  }
  cd base_orbit(double t) const override {
    if (std::abs(t) > max_window_ * (1 + 1e-9))
      throw EvaluationOverflow("riesz product: sample beyond the declared window");
    double p = 1;
    double scale = 1;
    for (int k = 1; k <= depth_; ++k) {
      scale *= ratio_;
      p *= std::cos(scale * t);
    }
    return p;
  }

 private:
  double ratio_, max_window_;
  int depth_;
};

}  // namespace arveson

#endif  // ARVESON_MODELS_FLOW_MODELS_HPP
