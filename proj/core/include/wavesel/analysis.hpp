#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wavesel/spectrum.hpp"

namespace wavesel {

enum class FeaturePolarity { dip, peak };

// One extracted transmission line.
struct ResonanceFeature {
  double center_m = 0.0;        // parabolically refined line center
  double fwhm_m = 0.0;          // width at half prominence, interpolated
  double extremum_value = 0.0;  // transmission at the refined extremum
  double prominence = 0.0;      // depth (dip) or height (peak) vs local baseline
  FeaturePolarity polarity = FeaturePolarity::dip;
};

struct ResonanceScan {
  std::vector<ResonanceFeature> features;  // ascending in center
  // Candidates whose half-prominence crossings fall outside the grid.
  int dropped = 0;
  FeaturePolarity polarity = FeaturePolarity::dip;
};

// Locates transmission lines by local-extremum prominence. Polarity (dips or
// peaks) is chosen from the median level; candidates below the prominence
// threshold are ignored, and neighbouring candidates whose separating saddle
// is shallower than the threshold are merged (flat-topped or clipped
// extrema). Throws std::invalid_argument for spectra shorter than 5 samples
// or a threshold outside (0, 1).
ResonanceScan find_resonances(const Spectrum& spectrum,
                              double prominence_threshold = 0.1);

// Summary statistics over the extracted features (medians throughout).
struct SpectralMetrics {
  std::size_t feature_count = 0;
  std::optional<double> fsr_m;     // median adjacent center spacing
  std::optional<double> finesse;   // fsr / median fwhm
  double median_fwhm_m = 0.0;
  double median_center_m = 0.0;
  double q_factor = 0.0;           // median center / median fwhm
};

// Throws std::invalid_argument when no features are given. FSR and finesse
// need at least two features.
SpectralMetrics compute_metrics(const std::vector<ResonanceFeature>& features);

// lambda / delta_lambda.
double q_factor(double center_m, double fwhm_m);

// Lorentzian line on a flat baseline:
// T(x) = baseline + amplitude * (fwhm/2)^2 / ((x - center)^2 + (fwhm/2)^2).
// Negative amplitude describes a dip.
struct LorentzianParams {
  double center_m = 0.0;
  double fwhm_m = 0.0;
  double amplitude = 0.0;
  double baseline = 0.0;

  double evaluate(double wavelength_m) const;
};

struct WavelengthWindow {
  double lo_m = 0.0;
  double hi_m = 0.0;
};

struct LorentzianFitResult {
  LorentzianParams params;
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Least-squares refinement of a single line restricted to the window.
// Throws std::invalid_argument when fewer than 8 samples fall inside the
// window and std::runtime_error on singular normal equations. Non-converged
// fits still return the best parameters found, flagged accordingly.
LorentzianFitResult fit_lorentzian(const Spectrum& spectrum,
                                   WavelengthWindow window,
                                   const LorentzianParams& init);

// Convenience wrapper: window +-window_fwhm line widths around a found
// feature and refine it, seeding the fit from the feature itself.
LorentzianFitResult refine_feature(const Spectrum& spectrum,
                                   const ResonanceFeature& feature,
                                   double window_fwhm = 3.0);

}  // namespace wavesel
