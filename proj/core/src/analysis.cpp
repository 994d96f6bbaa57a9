#include "wavesel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavesel/least_squares.hpp"

namespace wavesel {

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double min_over(const std::vector<double>& y, std::size_t first,
                std::size_t last) {
  double m = y[first];
  for (std::size_t i = first + 1; i <= last; ++i) m = std::min(m, y[i]);
  return m;
}

}  // namespace

ResonanceScan find_resonances(const Spectrum& spectrum,
                              double prominence_threshold) {
  spectrum.validate();
  const std::size_t n = spectrum.size();
  if (n < 5) {
    throw std::invalid_argument("spectrum too short to locate features");
  }
  if (!(prominence_threshold > 0.0) || !(prominence_threshold < 1.0)) {
    throw std::invalid_argument("prominence threshold must lie in (0, 1)");
  }

  const std::vector<double>& lam = spectrum.wavelength_m;
  const std::vector<double>& t = spectrum.transmission;
  const double med = median_of(t);
  const double t_max = *std::max_element(t.begin(), t.end());
  const double t_min = *std::min_element(t.begin(), t.end());
  const bool dips = (med - t_min) >= (t_max - med);

  // Work on y where every feature is a maximum.
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = dips ? -t[i] : t[i];

  struct Candidate {
    std::size_t peak;
    double prominence;
  };
  std::vector<Candidate> candidates;
  ResonanceScan out;
  out.polarity = dips ? FeaturePolarity::dip : FeaturePolarity::peak;

  // Plateau-aware local maxima with prominence walks; ties are passable so a
  // flat top yields a single candidate at its first index.
  std::size_t i = 1;
  while (i < n - 1) {
    if (y[i] > y[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n - 1 && y[j + 1] == y[j]) ++j;
      if (y[j + 1] < y[j]) {
        const std::size_t peak = i;
        std::size_t lo = i;
        while (lo > 0 && y[lo - 1] <= y[peak]) --lo;
        const double left_base =
            lo < peak ? min_over(y, lo, peak - 1) : y[peak];
        std::size_t hi = j;
        while (hi < n - 1 && y[hi + 1] <= y[peak]) ++hi;
        const double right_base =
            hi > j ? min_over(y, j + 1, hi) : y[peak];
        const double prom = y[peak] - std::max(left_base, right_base);
        if (prom > prominence_threshold) candidates.push_back({peak, prom});
        i = j + 1;
        continue;
      }
    }
    ++i;
  }

  // Merge candidates not separated by a saddle at least the threshold below
  // the lower of the pair (noise twins on clipped or flat-topped extrema).
  std::vector<Candidate> kept;
  for (const Candidate& cand : candidates) {
    if (!kept.empty()) {
      const Candidate& last = kept.back();
      const double valley = min_over(y, last.peak, cand.peak);
      if (std::min(y[last.peak], y[cand.peak]) - valley <
          prominence_threshold) {
        if (y[cand.peak] > y[last.peak]) {
          kept.back() = {cand.peak,
                         std::max(cand.prominence, last.prominence)};
        }
        continue;
      }
    }
    kept.push_back(cand);
  }

  for (const Candidate& cand : kept) {
    const std::size_t peak = cand.peak;
    const double half = y[peak] - cand.prominence / 2.0;
    std::size_t li = peak;
    while (li > 0 && y[li] > half) --li;
    std::size_t ri = peak;
    while (ri < n - 1 && y[ri] > half) ++ri;
    if (y[li] > half || y[ri] > half) {
      ++out.dropped;
      continue;
    }
    const double xl = lam[li] + (half - y[li]) * (lam[li + 1] - lam[li]) /
                                    (y[li + 1] - y[li]);
    const double xr = lam[ri] + (half - y[ri]) * (lam[ri - 1] - lam[ri]) /
                                    (y[ri - 1] - y[ri]);

    // Parabolic refinement of the extremum through the three top samples.
    const double y0 = y[peak - 1];
    const double y1 = y[peak];
    const double y2 = y[peak + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double center = lam[peak];
    double yv = y1;
    if (denom != 0.0) {
      const double delta = 0.5 * (y0 - y2) / denom;
      if (std::abs(delta) <= 1.0) {
        center = lam[peak] + delta * (lam[peak + 1] - lam[peak]);
        yv = y1 - 0.25 * (y0 - y2) * delta;
      }
    }

    ResonanceFeature feature;
    feature.center_m = center;
    feature.fwhm_m = xr - xl;
    feature.extremum_value = dips ? -yv : yv;
    feature.prominence = cand.prominence;
    feature.polarity = out.polarity;
    out.features.push_back(feature);
  }
  return out;
}

SpectralMetrics compute_metrics(const std::vector<ResonanceFeature>& features) {
  if (features.empty()) {
    throw std::invalid_argument("no features to summarize");
  }
  std::vector<double> centers;
  std::vector<double> widths;
  centers.reserve(features.size());
  widths.reserve(features.size());
  for (const ResonanceFeature& f : features) {
    centers.push_back(f.center_m);
    widths.push_back(f.fwhm_m);
  }
  std::sort(centers.begin(), centers.end());

  SpectralMetrics out;
  out.feature_count = features.size();
  out.median_center_m = median_of(centers);
  out.median_fwhm_m = median_of(widths);
  out.q_factor = out.median_center_m / out.median_fwhm_m;
  if (features.size() >= 2) {
    std::vector<double> spacings(centers.size() - 1);
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
      spacings[i] = centers[i + 1] - centers[i];
    }
    out.fsr_m = median_of(spacings);
    out.finesse = *out.fsr_m / out.median_fwhm_m;
  }
  return out;
}

double q_factor(double center_m, double fwhm_m) {
  if (!(center_m > 0.0)) throw std::invalid_argument("center must be positive");
  if (!(fwhm_m > 0.0)) throw std::invalid_argument("fwhm must be positive");
  return center_m / fwhm_m;
}

double LorentzianParams::evaluate(double wavelength_m) const {
  const double hw = fwhm_m / 2.0;
  const double dx = wavelength_m - center_m;
  return baseline + amplitude * hw * hw / (dx * dx + hw * hw);
}

LorentzianFitResult fit_lorentzian(const Spectrum& spectrum,
                                   WavelengthWindow window,
                                   const LorentzianParams& init) {
  spectrum.validate();
  if (!(window.lo_m < window.hi_m)) {
    throw std::invalid_argument("fit window is empty");
  }
  const auto first = std::lower_bound(spectrum.wavelength_m.begin(),
                                      spectrum.wavelength_m.end(), window.lo_m);
  const auto last = std::upper_bound(spectrum.wavelength_m.begin(),
                                     spectrum.wavelength_m.end(), window.hi_m);
  const std::size_t begin = static_cast<std::size_t>(
      first - spectrum.wavelength_m.begin());
  const std::size_t count = static_cast<std::size_t>(last - first);
  if (count < 8) {
    throw std::invalid_argument("fit window holds fewer than 8 samples");
  }
  if (!(init.fwhm_m > 0.0)) {
    throw std::invalid_argument("initial fwhm must be positive");
  }

  const std::vector<double>& lam = spectrum.wavelength_m;
  const std::vector<double>& t = spectrum.transmission;
  ResidualFn residuals = [&, begin, count](const std::vector<double>& p,
                                           std::vector<double>& r) {
    LorentzianParams model;
    model.center_m = p[0];
    model.fwhm_m = p[1];
    model.amplitude = p[2];
    model.baseline = p[3];
    for (std::size_t k = 0; k < count; ++k) {
      r[k] = model.evaluate(lam[begin + k]) - t[begin + k];
    }
  };

  LeastSquaresOptions options;
  options.max_iterations = 200;
  options.step_tolerance = 1e-9;
  options.typical_scale = {1e-9, 1e-13, 1e-3, 1e-3};

  LeastSquaresResult solved = solve_least_squares(
      residuals, {init.center_m, init.fwhm_m, init.amplitude, init.baseline},
      count, options);
  if (solved.singular) {
    throw std::runtime_error("singular normal equations in Lorentzian fit");
  }

  LorentzianFitResult out;
  out.params.center_m = solved.parameters[0];
  out.params.fwhm_m = std::abs(solved.parameters[1]);
  out.params.amplitude = solved.parameters[2];
  out.params.baseline = solved.parameters[3];
  out.rms_residual = solved.rms_residual;
  out.iterations = solved.iterations;
  out.converged = solved.converged;
  return out;
}

LorentzianFitResult refine_feature(const Spectrum& spectrum,
                                   const ResonanceFeature& feature,
                                   double window_fwhm) {
  if (!(window_fwhm > 0.0)) {
    throw std::invalid_argument("window width must be positive");
  }
  const double hw = window_fwhm * feature.fwhm_m;
  WavelengthWindow window{feature.center_m - hw, feature.center_m + hw};

  LorentzianParams init;
  init.center_m = feature.center_m;
  init.fwhm_m = feature.fwhm_m;
  const bool dip = feature.polarity == FeaturePolarity::dip;
  init.amplitude = dip ? -feature.prominence : feature.prominence;
  init.baseline = dip ? feature.extremum_value + feature.prominence
                      : feature.extremum_value - feature.prominence;
  return fit_lorentzian(spectrum, window, init);
}

}  // namespace wavesel
