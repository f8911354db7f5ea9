#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cpicert/field.hpp"
#include "cpicert/geometry.hpp"
#include "cpicert/interaction.hpp"

namespace cpicert {

// Finite-dimensional model of the concentration dynamics near a candidate
// configuration. Inverse scales s_i = 1/lambda_i follow s' = -M(a) s, where
// M(a) is the interaction matrix at the current points, so the linearization
// at a frozen configuration is exactly -M. Points drift along the projected
// gradient of K damped by s_i; weights relax toward equalized alpha_i^2 K.
//
// These are model dynamics, not the variational flow itself; every consumer
// labels the output accordingly.
struct FlowState {
  std::vector<SpherePoint> points;
  std::vector<double> inv_scales;
  std::vector<double> weights;
  double t = 0.0;
};

struct FlowOptions {
  double tol = 1e-8;  // local error target per step
  bool freeze_points = false;
  std::optional<SymMat> fixed_matrix;  // overrides the live interaction matrix
  double weight_band_low = 0.1;   // allowed alpha / alpha_balanced range
  double weight_band_high = 10.0;
  double min_step = 1e-14;
  double max_step = 10.0;
  double concentrate_factor = 1e-6;  // |s| < factor * |s0|
  double escape_factor = 10.0;       // |s| > factor * |s0|
  double basin_radius = 0.5;         // max drift of any point
  long long max_steps = 2000000;
};

struct StepResult {
  FlowState state;
  double dt_used = 0.0;
  double dt_next = 0.0;
};

enum class FlowVerdict { kConcentrates, kEscapes, kUndecided };

// Observer invoked after every accepted step with the new state and the
// matrix used for it.
using FlowObserver = std::function<void(const FlowState&, const SymMat&)>;

// One accepted embedded Runge-Kutta (Dormand-Prince 5(4)) step starting from
// dt; rejected attempts shrink the step (positivity of every s_i is enforced
// by halving). Throws StepUnderflow / DivergedWeights.
StepResult step_flow(const FlowState& state, const ScalarField& f,
                     const ManifoldModel& model, double dt,
                     const FlowOptions& opts = {});

// Integrates until t_end exactly (last step clamped).
FlowState run_flow_to(FlowState state, const ScalarField& f,
                      const ManifoldModel& model, double t_end,
                      const FlowOptions& opts = {},
                      const FlowObserver& observer = nullptr);

// Integrates until concentration, escape (|s| blowup or basin exit), or the
// horizon.
FlowVerdict run_to_verdict(FlowState state, const ScalarField& f,
                           const ManifoldModel& model, double horizon,
                           const FlowOptions& opts = {},
                           const FlowObserver& observer = nullptr);

// Interaction matrix at an arbitrary configuration (beta recomputed from the
// field at the current points).
SymMat flow_matrix(const FlowState& state, const ScalarField& f,
                   const ManifoldModel& model);

}  // namespace cpicert
