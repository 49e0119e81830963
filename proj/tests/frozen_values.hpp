#pragma once

// Frozen from tests/oracle/reference.py (NumPy, independent of this code).
// Do not regenerate from the library.

namespace frozen {

// two Gaussians 3 w0 apart, 1 zR, square windows of half-width 1.5 w0
inline constexpr double kTwoBeamRatioFree = 1.3702611247314598;
inline constexpr double kTwoBeamRatioResonant = 1.504581075800602;
inline constexpr double kTwoBeamRatioMatched = 1.1303132520497516;

// three Gaussians 4 w0 apart, 4 zR, half-width 2 w0
inline constexpr double kThreeBeamGrowthOuter = 0.43317364662233304;
inline constexpr double kThreeBeamGrowthCenter = 0.4346994078917401;

// single beam, 4 zR of its own waist, waists {1, 2, 4, 8} pi/k0
inline constexpr double kWaistSweepSpreading[4] = {0.4991538674677465, 0.17108161441750558,
                                                   0.04860476423356053, 0.012552464797462415};

// gamma = gamma_p, 4 pi/k0 input carried over zR(pi/k0)
inline constexpr double kAbsorptionRatio = 1.0001541889432215;

// 'EIT' letters, 2 zR of a 50 um waist
inline constexpr double kImageFidelityEit = 0.842178233614155;
inline constexpr double kImageFidelityFree = 0.6486463481246303;
inline constexpr double kImageBandFraction = 0.5128085432551578;
// oracle margin is 0.1936; the acceptance threshold keeps some slack below it
inline constexpr double kImageMarginThreshold = 0.15;

}  // namespace frozen
