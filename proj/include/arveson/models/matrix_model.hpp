#ifndef ARVESON_MODELS_MATRIX_MODEL_HPP
#define ARVESON_MODELS_MATRIX_MODEL_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <memory>

#include "arveson/core.hpp"

namespace arveson {

// Full matrix algebra M_n with the inner automorphism group
//   alpha_t(A) = e^{itH} A e^{-itH},  H = diag(lambda).
// Entrywise: alpha_t(A)_{jk} = e^{it(lambda_j - lambda_k)} A_{jk}, so every
// orbit is a trigonometric polynomial with frequencies in the difference set.
//
// Functionals are stored as a coefficient matrix G with phi(A) = sum G_{jk} A_{jk};
// the vector functional <e_a| . e_b> is G = E_{ab}.
class MatrixModel final : public Model {
 public:
  using Mat = Eigen::MatrixXcd;

  explicit MatrixModel(std::vector<double> eigenvalues)
      : lambda_(std::move(eigenvalues)) {
    if (lambda_.size() < 2) throw InvalidConfig("matrix model: need dimension >= 2");
    for (double l : lambda_)
      if (!std::isfinite(l)) throw InvalidConfig("matrix model: non-finite eigenvalue");
  }

  int n() const { return static_cast<int>(lambda_.size()); }
  double eigenvalue(int j) const { return lambda_[static_cast<std::size_t>(j)]; }

  std::string name() const override { return "matrix"; }
  int group_dim() const override { return 1; }
  std::vector<double> max_frequency() const override {
    const auto [lo, hi] = std::minmax_element(lambda_.begin(), lambda_.end());
    return {*hi - *lo};
  }

  // ---- handle constructors -------------------------------------------------

  Element element(Mat a, std::string label = "") const {
    if (a.rows() != n() || a.cols() != n())
      throw InvalidConfig("matrix model: element dimension mismatch");
    Element e;
    e.model = this;
    e.payload = std::make_shared<Mat>(std::move(a));
    e.label = std::move(label);
    return e;
  }
  Element matrix_unit(int j, int k) const {
    Mat a = Mat::Zero(n(), n());
    a(j, k) = 1;
    return element(std::move(a), "E" + std::to_string(j + 1) + std::to_string(k + 1));
  }

  Functional functional(Mat g, std::string label = "", bool is_state = false) const {
    if (g.rows() != n() || g.cols() != n())
      throw InvalidConfig("matrix model: functional dimension mismatch");
    Functional f;
    f.model = this;
    f.payload = std::make_shared<Mat>(std::move(g));
    f.label = std::move(label);
    f.is_state = is_state;
    return f;
  }
  // <e_a| . e_b>; a state when a == b.
  Functional vector_functional(int a, int b) const {
    Mat g = Mat::Zero(n(), n());
    g(a, b) = 1;
    return functional(std::move(g),
                      "w" + std::to_string(a + 1) + std::to_string(b + 1), a == b);
  }
  Functional normalized_trace() const {
    Mat g = Mat::Identity(n(), n()) / static_cast<double>(n());
    return functional(std::move(g), "tr_n", true);
  }

  static const Mat& matrix_of(const Element& e) {
    return *static_cast<const Mat*>(e.payload.get());
  }
  static const Mat& matrix_of(const Functional& f) {
    return *static_cast<const Mat*>(f.payload.get());
  }

  // ---- Model interface -----------------------------------------------------

  cd pair(const Functional& phi, const Element& a,
          const GroupParameter& x) const override {
    const Mat& g = matrix_of(phi);
    const Mat& m = matrix_of(a);
    const double t = x[0];
    cd acc = 0;
    for (int j = 0; j < n(); ++j)
      for (int k = 0; k < n(); ++k) {
        const cd w = g(j, k) * m(j, k);
        if (w != cd(0)) acc += w * std::polar(1.0, t * (lambda_[j2u(j)] - lambda_[j2u(k)]));
      }
    return acc;
  }

  std::optional<std::vector<OrbitMode>> orbit_modes(
      const Functional& phi, const Element& a) const override {
    const Mat& g = matrix_of(phi);
    const Mat& m = matrix_of(a);
    std::vector<OrbitMode> modes;
    for (int j = 0; j < n(); ++j)
      for (int k = 0; k < n(); ++k) {
        const cd w = g(j, k) * m(j, k);
        if (w != cd(0))
          modes.push_back({{lambda_[j2u(j)] - lambda_[j2u(k)]}, w});
      }
    return modes;
  }

  Element unit() const override {
    return element(Mat::Identity(n(), n()), "I");
  }
  Element translate(const Element& a, const GroupParameter& x) const override {
    Mat m = matrix_of(a);
    for (int j = 0; j < n(); ++j)
      for (int k = 0; k < n(); ++k)
        m(j, k) *= std::polar(1.0, x[0] * (lambda_[j2u(j)] - lambda_[j2u(k)]));
    return element(std::move(m), a.label.empty() ? "" : "alpha(" + a.label + ")");
  }
  Element combine(cd ca, const Element& a, cd cb, const Element& b) const override {
    return element(ca * matrix_of(a) + cb * matrix_of(b));
  }
  Element star(const Element& a) const override {
    return element(matrix_of(a).adjoint(),
                   a.label.empty() ? "" : a.label + "*");
  }
  Functional conj_functional(const Functional& phi) const override {
    // phibar(A) = conj phi(A*): coefficient matrix is the conjugate transpose.
    Functional f = functional(matrix_of(phi).adjoint(),
                              phi.label.empty() ? "" : phi.label + "~");
    f.is_state = phi.is_state;
    return f;
  }
  double element_norm(const Element& a) const override {
    Eigen::JacobiSVD<Mat> svd(matrix_of(a));
    return svd.singularValues()(0);
  }
  double functional_norm(const Functional& phi) const override {
    // Dual of the operator norm: trace norm of the coefficient matrix.
    Eigen::JacobiSVD<Mat> svd(matrix_of(phi));
    return svd.singularValues().sum();
  }

  std::vector<Element> generator_elements() const override {
    std::vector<Element> out;
    for (int j = 0; j < n(); ++j)
      for (int k = 0; k < n(); ++k) out.push_back(matrix_unit(j, k));
    return out;
  }
  std::vector<Functional> functional_family() const override {
    std::vector<Functional> out;
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b) out.push_back(vector_functional(a, b));
    out.push_back(normalized_trace());
    return out;
  }

 private:
  static std::size_t j2u(int j) { return static_cast<std::size_t>(j); }
  std::vector<double> lambda_;
};

}  // namespace arveson

#endif  // ARVESON_MODELS_MATRIX_MODEL_HPP
