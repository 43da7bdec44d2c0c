#pragma once
// Dyadic frequency blocks on the resolved range of a grid.
//
// phi_hat(xi) = ramp(|xi|): 1 on |xi| <= 1, 0 on |xi| >= 2, C2 polynomial between.
// S_j multiplies by phi_hat(2^-j k); Delta_j = S_{j+1} - S_j is supported in 2^j < |k| < 2^{j+2}.

#include <memory>
#include <vector>

#include "nswp/spectral_core.hpp"

namespace nswp {

struct DyadicFamily {
  GridSpec grid;
  int j_min = 0;
  int j_max = 0;
  std::shared_ptr<const Wavenumbers> waves;

  int band_count() const { return j_max - j_min + 1; }
  std::vector<int> bands() const;
  bool has_band(int j) const { return j >= j_min && j <= j_max; }

  // Radial multiplier values at |k| = r.
  static double phi_hat(int j, double r);
  static double psi(int j, double r);
};

// Throws GridError when fewer than 4 bands fit.
DyadicFamily build_family(const GridSpec& g);

ScalarField block(const DyadicFamily& fam, const ScalarField& f, int j);
VectorField block(const DyadicFamily& fam, const VectorField& v, int j);
// j in [j_min, j_max + 1]; S_{j_max+1} passes every retained mode.
ScalarField lowpass(const DyadicFamily& fam, const ScalarField& f, int j);
VectorField lowpass(const DyadicFamily& fam, const VectorField& v, int j);

// Physical samples of Delta_j f for each component (avoids a spectral copy).
CVec block_physical(const DyadicFamily& fam, const ScalarField& f, int j);

}  // namespace nswp
