#pragma once

#include "specdiff/bayes.hpp"

namespace specdiff {

/// sigma^2 = 1, b = 0, mu = 1.
DiffusionParams make_trivial_truth(Grid grid);

struct TruthFixture {
  CoefficientState state;
  DiffusionParams params;
};

/// Interior-supported truth with all level-3 coefficients of the prior's
/// index set at the bound (alternating signs); lies in the prior support.
TruthFixture make_level3_truth(const PriorModel& model);

/// Default prior used by the experiments: db3 series on [0.1, 0.9], s = 2,
/// uniform coefficients on [-1, 1].
PriorConfig default_prior_config();

/// Smooth bump drift model: sigma^2 = 1, b an interior cosine bump.
DiffusionParams make_bump_drift_truth(Grid grid, double amplitude = 0.5);

}  // namespace specdiff
