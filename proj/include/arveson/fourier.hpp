#ifndef ARVESON_FOURIER_HPP
#define ARVESON_FOURIER_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "arveson/core.hpp"
#include "arveson/fft.hpp"

namespace arveson {

// ---------------------------------------------------------------------------
// Spectral data types
// ---------------------------------------------------------------------------

struct SpectralDensity {
  CuboidWindow window;  // provenance: the sampling window that produced this
  std::vector<int> signature;
  std::vector<std::vector<double>> freq_axes;  // centered dual grid per axis
  std::vector<cd> values;                      // row-major, axis 0 slowest

  int dim() const { return window.dim(); }
  int nodes(int a) const {
    return static_cast<int>(freq_axes[static_cast<std::size_t>(a)].size());
  }
  double cell(int a) const {
    const auto& f = freq_axes[static_cast<std::size_t>(a)];
    return f[1] - f[0];
  }
  double max_abs() const {
    double m = 0;
    for (const cd& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

struct FreqBox {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<double>& p, double pad = 0) const {
    for (int a = 0; a < dim(); ++a)
      if (p[static_cast<std::size_t>(a)] < lo[static_cast<std::size_t>(a)] - pad ||
          p[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)] + pad)
        return false;
    return true;
  }
  bool intersects(const FreqBox& o, double pad = 0) const {
    for (int a = 0; a < dim(); ++a)
      if (hi[static_cast<std::size_t>(a)] + pad < o.lo[static_cast<std::size_t>(a)] ||
          o.hi[static_cast<std::size_t>(a)] + pad < lo[static_cast<std::size_t>(a)])
        return false;
    return true;
  }
  bool inside(const FreqBox& o, double pad = 0) const {
    for (int a = 0; a < dim(); ++a)
      if (lo[static_cast<std::size_t>(a)] < o.lo[static_cast<std::size_t>(a)] - pad ||
          hi[static_cast<std::size_t>(a)] > o.hi[static_cast<std::size_t>(a)] + pad)
        return false;
    return true;
  }
  static FreqBox hull(const FreqBox& a, const FreqBox& b) {
    FreqBox h = a;
    for (int ax = 0; ax < a.dim(); ++ax) {
      h.lo[static_cast<std::size_t>(ax)] =
          std::min(a.lo[static_cast<std::size_t>(ax)], b.lo[static_cast<std::size_t>(ax)]);
      h.hi[static_cast<std::size_t>(ax)] =
          std::max(a.hi[static_cast<std::size_t>(ax)], b.hi[static_cast<std::size_t>(ax)]);
    }
    return h;
  }
  static FreqBox point(const std::vector<double>& p, double half = 0) {
    FreqBox b;
    b.lo = p;
    b.hi = p;
    for (auto& v : b.lo) v -= half;
    for (auto& v : b.hi) v += half;
    return b;
  }
};

struct SupportSet {
  std::vector<FreqBox> boxes;
  double threshold = 0;        // tau_rel used at detection time
  std::vector<double> cell;    // grid cell width per axis (0 for synthetic sets)

  bool empty() const { return boxes.empty(); }
  int dim() const { return boxes.empty() ? 0 : boxes.front().dim(); }

  bool contains(const std::vector<double>& p, double pad = 0) const {
    for (const auto& b : boxes)
      if (b.contains(p, pad)) return true;
    return false;
  }
  bool intersects(const SupportSet& o, double pad = 0) const {
    for (const auto& a : boxes)
      for (const auto& b : o.boxes)
        if (a.intersects(b, pad)) return true;
    return false;
  }
  bool subset_of(const SupportSet& o, double pad) const {
    for (const auto& a : boxes) {
      bool ok = false;
      for (const auto& b : o.boxes)
        if (a.inside(b, pad)) {
          ok = true;
          break;
        }
      if (!ok) return false;  // conservative: each box must fit one target box
    }
    return true;
  }

  // Sorted merge of overlapping boxes; deterministic regardless of insertion
  // order.
  void normalize() {
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < boxes.size() && !merged; ++i)
        for (std::size_t j = i + 1; j < boxes.size() && !merged; ++j)
          if (boxes[i].intersects(boxes[j])) {
            boxes[i] = FreqBox::hull(boxes[i], boxes[j]);
            boxes.erase(boxes.begin() + static_cast<long>(j));
            merged = true;
          }
    }
    std::sort(boxes.begin(), boxes.end(), [](const FreqBox& a, const FreqBox& b) {
      return std::lexicographical_compare(a.lo.begin(), a.lo.end(), b.lo.begin(),
                                          b.lo.end());
    });
  }
  void merge_with(const SupportSet& o) {
    for (const auto& b : o.boxes) boxes.push_back(b);
    for (std::size_t a = 0; a < o.cell.size(); ++a) {
      if (cell.size() <= a) cell.push_back(o.cell[a]);
      else cell[a] = std::max(cell[a], o.cell[a]);
    }
    normalize();
  }
  double max_cell() const {
    double m = 0;
    for (double c : cell) m = std::max(m, c);
    return m;
  }
};

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

// Windowed Fourier transform of an orbit, kernel exp(-i <p, x>) in the
// signature inner product, normalization (2 pi)^{-d/2} * prod(step).  A pure
// exponential e^{iqx} peaks at q with height (2 pi)^{-d/2} * (node count) *
// prod(step), i.e. about the window volume times (2 pi)^{-d/2}.
inline SpectralDensity orbit_fourier(const OrbitSamples& samples) {
  const int d = samples.dim();
  SpectralDensity out;
  out.window = samples.window;
  out.signature = samples.signature;
  out.values = samples.values;
  std::vector<int> shape;
  double scale = std::pow(kTwoPi, -0.5 * d);
  for (int a = 0; a < d; ++a) {
    const int n = samples.window.nodes(a);
    shape.push_back(n);
    const double step = samples.window.steps[static_cast<std::size_t>(a)];
    scale *= step;
    std::vector<double> freqs(static_cast<std::size_t>(n));
    const int m = (n - 1) / 2;
    for (int k = 0; k < n; ++k)
      freqs[static_cast<std::size_t>(k)] = kTwoPi * (k - m) / (n * step);
    out.freq_axes.push_back(std::move(freqs));
  }
  for (int a = 0; a < d; ++a)
    fft::transform_axis(out.values, shape, a,
                        samples.signature[static_cast<std::size_t>(a)]);
  for (auto& v : out.values) v *= scale;
  return out;
}

// Exact inverse of orbit_fourier (roundtrip contract).
inline OrbitSamples inverse_orbit_fourier(const SpectralDensity& density) {
  const int d = density.dim();
  OrbitSamples out;
  out.window = density.window;
  out.signature = density.signature;
  out.values = density.values;
  std::vector<int> shape;
  double scale = std::pow(kTwoPi, -0.5 * d);
  for (int a = 0; a < d; ++a) {
    shape.push_back(density.nodes(a));
    scale *= density.window.steps[static_cast<std::size_t>(a)];
  }
  for (int a = 0; a < d; ++a)
    fft::transform_axis(out.values, shape, a,
                        density.signature[static_cast<std::size_t>(a)], true);
  for (auto& v : out.values) v /= scale;
  return out;
}

// ---------------------------------------------------------------------------
// Support detection
// ---------------------------------------------------------------------------

inline SupportSet detect_support(const SpectralDensity& density, double tau_rel) {
  if (!(tau_rel > 0 && tau_rel < 1))
    throw InvalidConfig("detect_support: threshold outside (0,1)");
  const int d = density.dim();
  SupportSet out;
  out.threshold = tau_rel;
  for (int a = 0; a < d; ++a) out.cell.push_back(density.cell(a));
  const double peak = density.max_abs();
  if (peak < 1e-12) return out;
  const double cut = tau_rel * peak;

  std::vector<int> shape;
  long total = 1;
  for (int a = 0; a < d; ++a) {
    shape.push_back(density.nodes(a));
    total *= density.nodes(a);
  }
  std::vector<char> mark(static_cast<std::size_t>(total), 0);
  for (long i = 0; i < total; ++i)
    if (std::abs(density.values[static_cast<std::size_t>(i)]) >= cut)
      mark[static_cast<std::size_t>(i)] = 1;

  // One-cell dilation per axis.
  std::vector<char> dil = mark;
  if (d == 1) {
    for (long i = 0; i < total; ++i)
      if (mark[static_cast<std::size_t>(i)]) {
        if (i > 0) dil[static_cast<std::size_t>(i - 1)] = 1;
        if (i + 1 < total) dil[static_cast<std::size_t>(i + 1)] = 1;
      }
  } else {
    const int n0 = shape[0], n1 = shape[1];
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j)
        if (mark[static_cast<std::size_t>(i * n1 + j)])
          for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
              const int a = i + di, b = j + dj;
              if (a >= 0 && a < n0 && b >= 0 && b < n1)
                dil[static_cast<std::size_t>(a * n1 + b)] = 1;
            }
  }

  // Connected components -> bounding boxes (merged to disjointness).
  if (d == 1) {
    const auto& f = density.freq_axes[0];
    long i = 0;
    while (i < total) {
      if (!dil[static_cast<std::size_t>(i)]) {
        ++i;
        continue;
      }
      long j = i;
      while (j + 1 < total && dil[static_cast<std::size_t>(j + 1)]) ++j;
      out.boxes.push_back(
          {{f[static_cast<std::size_t>(i)]}, {f[static_cast<std::size_t>(j)]}});
      i = j + 1;
    }
  } else {
    const int n0 = shape[0], n1 = shape[1];
    std::vector<int> comp(static_cast<std::size_t>(total), -1);
    int ncomp = 0;
    std::vector<long> stack;
    for (long s = 0; s < total; ++s) {
      if (!dil[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0)
        continue;
      stack.push_back(s);
      comp[static_cast<std::size_t>(s)] = ncomp;
      while (!stack.empty()) {
        const long cur = stack.back();
        stack.pop_back();
        const int i = static_cast<int>(cur / n1), j = static_cast<int>(cur % n1);
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            const int a = i + di, b = j + dj;
            if (a < 0 || a >= n0 || b < 0 || b >= n1) continue;
            const long idx = static_cast<long>(a) * n1 + b;
            if (dil[static_cast<std::size_t>(idx)] &&
                comp[static_cast<std::size_t>(idx)] < 0) {
              comp[static_cast<std::size_t>(idx)] = ncomp;
              stack.push_back(idx);
            }
          }
      }
      ++ncomp;
    }
    std::vector<FreqBox> bb(static_cast<std::size_t>(ncomp));
    std::vector<bool> seen(static_cast<std::size_t>(ncomp), false);
    for (long s = 0; s < total; ++s) {
      const int c = comp[static_cast<std::size_t>(s)];
      if (c < 0) continue;
      const int i = static_cast<int>(s / n1), j = static_cast<int>(s % n1);
      const std::vector<double> p{density.freq_axes[0][static_cast<std::size_t>(i)],
                                  density.freq_axes[1][static_cast<std::size_t>(j)]};
      if (!seen[static_cast<std::size_t>(c)]) {
        bb[static_cast<std::size_t>(c)] = FreqBox::point(p);
        seen[static_cast<std::size_t>(c)] = true;
      } else {
        bb[static_cast<std::size_t>(c)] =
            FreqBox::hull(bb[static_cast<std::size_t>(c)], FreqBox::point(p));
      }
    }
    out.boxes = std::move(bb);
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct SpectrumConfig {
  CuboidWindow window;
  double tau_rel = 1e-6;
  double taper_ratio = 0;  // Gaussian taper for non-decaying orbits; 0 = off
};

struct SpectrumResult {
  SupportSet total;
  std::vector<std::pair<std::string, SupportSet>> per_element;  // Sp^A alpha
};

inline SupportSet element_spectrum(const Model& action, const Element& a,
                                   const std::vector<Functional>& functionals,
                                   const SpectrumConfig& cfg) {
  SupportSet sp;
  SampleOptions opt;
  opt.taper_ratio = cfg.taper_ratio;
  for (const auto& phi : functionals) {
    const auto samples = sample_orbit(action, phi, a, cfg.window, opt);
    sp.merge_with(detect_support(orbit_fourier(samples), cfg.tau_rel));
  }
  return sp;
}

inline SpectrumResult arveson_spectrum(const Model& action,
                                       const std::vector<Element>& elements,
                                       const std::vector<Functional>& functionals,
                                       const SpectrumConfig& cfg) {
  if (elements.empty() || functionals.empty())
    throw InvalidConfig("arveson_spectrum: empty generator family");
  SpectrumResult out;
  for (const auto& a : elements) {
    SupportSet sp = element_spectrum(action, a, functionals, cfg);
    out.total.merge_with(sp);
    out.per_element.emplace_back(a.label, std::move(sp));
  }
  return out;
}

struct SubspaceTestReport {
  bool inside = true;
  // Violations: functional label and the leaked box.
  std::vector<std::pair<std::string, FreqBox>> leaks;
};

// Membership surrogate for the spectral subspace of Delta: every supplied
// functional's detected orbit support must sit inside Delta after a one-cell
// dilation.
inline SubspaceTestReport spectral_subspace_test(const Model& action, const Element& a,
                                                 const SupportSet& delta,
                                                 const std::vector<Functional>& functionals,
                                                 const SpectrumConfig& cfg) {
  SubspaceTestReport rep;
  SampleOptions opt;
  opt.taper_ratio = cfg.taper_ratio;
  for (const auto& phi : functionals) {
    const auto sp = detect_support(
        orbit_fourier(sample_orbit(action, phi, a, cfg.window, opt)), cfg.tau_rel);
    const double pad = sp.max_cell();
    for (const auto& box : sp.boxes) {
      bool ok = false;
      for (const auto& target : delta.boxes)
        if (box.inside(target, pad)) {
          ok = true;
          break;
        }
      if (!ok) {
        rep.inside = false;
        rep.leaks.emplace_back(phi.label, box);
      }
    }
  }
  return rep;
}

struct TransferReport {
  SupportSet spectrum;       // Sp^A alpha in (p0, p1) with Minkowski signs
  bool energy_decreasing = false;
};

// Energy-momentum transfer of a single observable under the 1+1 spacetime
// action; energy-decreasing iff the detected support avoids the closed
// forward cone {p0 >= |p1|} (grid-dilated).
inline TransferReport energy_momentum_transfer(const Element& a,
                                               const SpectrumConfig& cfg) {
  const Model& action = *a.model;
  if (action.group_dim() != 2 || action.signature() != std::vector<int>{+1, -1})
    throw SignatureMismatch("energy_momentum_transfer: needs a 1+1 Minkowski action");
  TransferReport rep;
  rep.spectrum = element_spectrum(action, a, action.functional_family(), cfg);
  const double pad = rep.spectrum.max_cell();
  rep.energy_decreasing = true;
  for (const auto& b : rep.spectrum.boxes) {
    const double l1 = b.lo[1], h1 = b.hi[1];
    const double minabs = (l1 <= 0 && 0 <= h1) ? 0 : std::min(std::abs(l1), std::abs(h1));
    if (b.hi[0] + pad >= minabs) {
      rep.energy_decreasing = false;
      break;
    }
  }
  return rep;
}

}  // namespace arveson

#endif  // ARVESON_FOURIER_HPP
