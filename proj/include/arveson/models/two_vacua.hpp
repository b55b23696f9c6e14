#ifndef ARVESON_MODELS_TWO_VACUA_HPP
#define ARVESON_MODELS_TWO_VACUA_HPP

#include <map>
#include <memory>

#include "arveson/core.hpp"

namespace arveson {

// Commutative toy with two ergodic components: functions on two disjoint
// circles, each rotated at its own frequency (1 and sqrt(2)).  Elements and
// functionals are finite combinations of Fourier modes (c, k), c in {0,1}:
//   alpha_t e_{c,k} = exp(i k nu_c t) e_{c,k},
// and the pairing is mode-diagonal.  The Haar states of the two circles give
// two linearly independent invariant functionals, while the declared element
// family contains a single invariant element (the unit), so the eigenspace
// dimensions at frequency 0 differ across the pairing.
class TwoVacuaModel final : public Model {
 public:
  // key: (circle, mode index)
  using Coeffs = std::map<std::pair<int, int>, cd>;

  explicit TwoVacuaModel(int max_mode = 2)
      : max_mode_(max_mode), nu_{1.0, std::sqrt(2.0)} {
    if (max_mode < 1) throw InvalidConfig("two-vacua toy: need max mode >= 1");
  }

  double frequency_of(int circle, int k) const {
    return k * nu_[static_cast<std::size_t>(circle)];
  }

  Element element(Coeffs c, std::string label = "") const {
    Element e;
    e.model = this;
    e.payload = std::make_shared<Coeffs>(std::move(c));
    e.label = std::move(label);
    return e;
  }
  Element mode_element(int circle, int k) const {
    return element({{{circle, k}, 1.0}},
                   "e" + std::to_string(circle) + "," + std::to_string(k));
  }
  Functional functional(Coeffs c, std::string label = "", bool is_state = false) const {
    Functional f;
    f.model = this;
    f.payload = std::make_shared<Coeffs>(std::move(c));
    f.label = std::move(label);
    f.is_state = is_state;
    return f;
  }
  // Haar measure on one circle: picks out the k = 0 coefficient there.
  Functional haar_state(int circle) const {
    return functional({{{circle, 0}, 1.0}}, "haar" + std::to_string(circle), true);
  }
  Functional mode_functional(int circle, int k) const {
    return functional({{{circle, k}, 1.0}},
                      "d" + std::to_string(circle) + "," + std::to_string(k));
  }

  static const Coeffs& coeffs_of(const Element& e) {
    return *static_cast<const Coeffs*>(e.payload.get());
  }
  static const Coeffs& coeffs_of(const Functional& f) {
    return *static_cast<const Coeffs*>(f.payload.get());
  }

  std::string name() const override { return "two-vacua"; }
  int group_dim() const override { return 1; }
  std::vector<double> max_frequency() const override {
    return {max_mode_ * nu_[1]};
  }

  cd pair(const Functional& phi, const Element& a,
          const GroupParameter& x) const override {
    const auto& g = coeffs_of(phi);
    const auto& m = coeffs_of(a);
    cd acc = 0;
    for (const auto& [key, w] : m) {
      auto it = g.find(key);
      if (it == g.end()) continue;
      acc += it->second * w *
             std::polar(1.0, frequency_of(key.first, key.second) * x[0]);
    }
    return acc;
  }

  std::optional<std::vector<OrbitMode>> orbit_modes(
      const Functional& phi, const Element& a) const override {
    const auto& g = coeffs_of(phi);
    const auto& m = coeffs_of(a);
    std::vector<OrbitMode> modes;
    for (const auto& [key, w] : m) {
      auto it = g.find(key);
      if (it == g.end()) continue;
      modes.push_back({{frequency_of(key.first, key.second)}, it->second * w});
    }
    return modes;
  }

  Element unit() const override {
    return element({{{0, 0}, 1.0}, {{1, 0}, 1.0}}, "I");
  }
  Element translate(const Element& a, const GroupParameter& x) const override {
    Coeffs c = coeffs_of(a);
    for (auto& [key, w] : c)
      w *= std::polar(1.0, frequency_of(key.first, key.second) * x[0]);
    return element(std::move(c), a.label);
  }
  Element combine(cd ca, const Element& a, cd cb, const Element& b) const override {
    Coeffs c;
    for (const auto& [key, w] : coeffs_of(a)) c[key] += ca * w;
    for (const auto& [key, w] : coeffs_of(b)) c[key] += cb * w;
    return element(std::move(c));
  }
  Element star(const Element& a) const override {
    Coeffs c;
    for (const auto& [key, w] : coeffs_of(a))
      c[{key.first, -key.second}] = std::conj(w);
    return element(std::move(c), a.label.empty() ? "" : a.label + "*");
  }
  Functional conj_functional(const Functional& phi) const override {
    Coeffs c;
    for (const auto& [key, w] : coeffs_of(phi))
      c[{key.first, -key.second}] = std::conj(w);
    Functional f = functional(std::move(c), phi.label.empty() ? "" : phi.label + "~");
    f.is_state = phi.is_state;
    return f;
  }
  double element_norm(const Element& a) const override {
    // Sup norm of a trigonometric polynomial is bounded by the coefficient
    // l1 norm per circle; the max over circles is reported.
    double n0 = 0, n1 = 0;
    for (const auto& [key, w] : coeffs_of(a))
      (key.first == 0 ? n0 : n1) += std::abs(w);
    return std::max(n0, n1);
  }
  double functional_norm(const Functional& phi) const override {
    double n = 0;
    for (const auto& [key, w] : coeffs_of(phi)) n += std::abs(w);
    return n;
  }

  // The unit plus all nonzero modes per circle; individual circle indicators
  // are deliberately absent so the only invariant member is the unit.
  std::vector<Element> generator_elements() const override {
    std::vector<Element> out{unit()};
    for (int c = 0; c < 2; ++c)
      for (int k = 1; k <= max_mode_; ++k) {
        out.push_back(mode_element(c, k));
        out.push_back(mode_element(c, -k));
      }
    return out;
  }
  std::vector<Functional> functional_family() const override {
    std::vector<Functional> out{haar_state(0), haar_state(1)};
    for (int c = 0; c < 2; ++c)
      for (int k = 1; k <= max_mode_; ++k) {
        out.push_back(mode_functional(c, k));
        out.push_back(mode_functional(c, -k));
      }
    return out;
  }

 private:
  int max_mode_;
  double nu_[2];
};

}  // namespace arveson

#endif  // ARVESON_MODELS_TWO_VACUA_HPP
