#include "specdiff/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace specdiff {

DiffusionParams make_trivial_truth(Grid grid) {
  return DiffusionParams::make(GridFn::constant(grid, 1.0),
                               GridFn::constant(grid, 0.0));
}

TruthFixture make_level3_truth(const PriorModel& model) {
  CoefficientState st = model.zero_state();
  const double B = model.config().B;
  int sign = 1;
  for (size_t i = 0; i < model.u_indices().size(); ++i)
    if (model.u_indices()[i].level == 3) {
      st.u[i] = sign * B;
      sign = -sign;
    }
  sign = -1;
  for (size_t i = 0; i < model.ubar_indices().size(); ++i)
    if (model.ubar_indices()[i].level == 3) {
      st.u_bar[i] = sign * B;
      sign = -sign;
    }
  return {st, model.assemble(st)};
}

PriorConfig default_prior_config() {
  PriorConfig cfg;
  cfg.s = 2.0;
  cfg.B = 1.0;
  cfg.B_tilde = 1.0;
  cfg.density = CoeffDensity::kUniform;
  cfg.vanishing_moments = 3;
  cfg.J0 = 2;
  cfg.Jmax = 6;
  cfg.A = 0.1;
  cfg.B_int = 0.9;
  return cfg;
}

DiffusionParams make_bump_drift_truth(Grid grid, double amplitude) {
  // C^inf bump on [0.2, 0.8], zero outside with all derivatives
  const GridFn b = GridFn::from_function(grid, [amplitude](double x) {
    if (x <= 0.2 || x >= 0.8) return 0.0;
    const double t = (x - 0.2) / 0.6;
    const double window = std::exp(-1.0 / (t * (1.0 - t)));
    return amplitude * std::sin(2.0 * std::numbers::pi * t) * window * std::exp(4.0);
  });
  return DiffusionParams::make(GridFn::constant(grid, 1.0), b);
}

}  // namespace specdiff
