#include "cpicert/shadow_flow.hpp"

#include <algorithm>
#include <cmath>

namespace cpicert {

namespace {

// Packed layout: [s_1..s_p, a_1(5) .. a_p(5), alpha_1..alpha_p].
std::vector<double> pack(const FlowState& st) {
  const std::size_t p = st.inv_scales.size();
  std::vector<double> y(7 * p);
  for (std::size_t i = 0; i < p; ++i) y[i] = st.inv_scales[i];
  for (std::size_t i = 0; i < p; ++i)
    for (int k = 0; k < 5; ++k) y[p + 5 * i + k] = st.points[i][k];
  for (std::size_t i = 0; i < p; ++i) y[6 * p + i] = st.weights[i];
  return y;
}

FlowState unpack(const std::vector<double>& y, double t) {
  const std::size_t p = y.size() / 7;
  FlowState st;
  st.t = t;
  st.inv_scales.assign(y.begin(), y.begin() + p);
  st.weights.assign(y.begin() + 6 * p, y.end());
  st.points.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    Vec5 c;
    for (int k = 0; k < 5; ++k) c[k] = y[p + 5 * i + k];
    st.points.emplace_back(c);  // renormalizes after the step
  }
  return st;
}

SymMat matrix_at(const std::vector<SpherePoint>& pts, const ScalarField& f,
                 const ManifoldModel& model) {
  const int p = static_cast<int>(pts.size());
  SymMat m(p);
  std::vector<double> kv(p);
  for (int i = 0; i < p; ++i) {
    const TangentFrame frame = tangent_frame(pts[i]);
    const IntrinsicDerivatives d = f.intrinsic_derivatives(pts[i], frame);
    kv[i] = d.value;
    const double beta =
        -d.laplace_beltrami / (3.0 * d.value) - 2.0 * model.mass(pts[i]);
    m.set(i, i, beta / d.value);
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      m.set(i, j, -2.0 * model.green(pts[i], pts[j]) / std::sqrt(kv[i] * kv[j]));
  return m;
}

void rhs(const std::vector<double>& y, const ScalarField& f,
         const ManifoldModel& model, const FlowOptions& opts,
         std::vector<double>& dy) {
  const std::size_t p = y.size() / 7;
  dy.assign(y.size(), 0.0);

  std::vector<SpherePoint> pts;
  pts.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    Vec5 c;
    for (int k = 0; k < 5; ++k) c[k] = y[p + 5 * i + k];
    pts.emplace_back(c);
  }

  const SymMat m = opts.fixed_matrix ? *opts.fixed_matrix
                                     : matrix_at(pts, f, model);

  for (std::size_t i = 0; i < p; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      acc += m(static_cast<int>(i), static_cast<int>(j)) * y[j];
    dy[i] = -acc;
  }

  std::vector<double> kv(p);
  std::vector<Vec5> grads(p);
  for (std::size_t i = 0; i < p; ++i) {
    const AmbientDerivatives amb = f.ambient_derivatives(pts[i].coords());
    kv[i] = amb.value;
    grads[i] =
        sub(amb.grad, scale(pts[i].coords(), dot(amb.grad, pts[i].coords())));
  }

  if (!opts.freeze_points) {
    for (std::size_t i = 0; i < p; ++i)
      for (int k = 0; k < 5; ++k) dy[p + 5 * i + k] = y[i] * grads[i][k];
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double alpha = y[6 * p + i];
    mean += alpha * alpha * kv[i];
  }
  mean /= static_cast<double>(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double alpha = y[6 * p + i];
    dy[6 * p + i] = -(alpha * alpha * kv[i] - mean) * alpha;
  }
}

void check_weights(const FlowState& st, const ScalarField& f,
                   const FlowOptions& opts) {
  const std::size_t p = st.weights.size();
  double mean = 0.0;
  std::vector<double> energy(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double k = f.value(st.points[i].coords());
    energy[i] = st.weights[i] * st.weights[i] * k;
    mean += energy[i];
  }
  mean /= static_cast<double>(p);
  if (!(mean > 0.0)) throw DivergedWeights(0, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    // ratio of alpha_i to the balanced weight sqrt(mean / K(a_i))
    const double ratio = std::sqrt(energy[i] / mean);
    if (ratio < opts.weight_band_low || ratio > opts.weight_band_high)
      throw DivergedWeights(static_cast<int>(i), ratio);
  }
}

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695,
                           393.0 / 640,     -92097.0 / 339200,
                           187.0 / 2100,    1.0 / 40};

}  // namespace

SymMat flow_matrix(const FlowState& state, const ScalarField& f,
                   const ManifoldModel& model) {
  return matrix_at(state.points, f, model);
}

StepResult step_flow(const FlowState& state, const ScalarField& f,
                     const ManifoldModel& model, double dt,
                     const FlowOptions& opts) {
  if (!(dt > 0.0)) throw ConfigError("flow step needs dt > 0");
  const std::size_t p = state.inv_scales.size();
  const std::size_t dim = 7 * p;

  std::vector<double> y = pack(state);
  std::vector<std::vector<double>> k(7, std::vector<double>(dim));
  std::vector<double> stage(dim);

  double h = dt;
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (h < opts.min_step) throw StepUnderflow(state.t);

    // a wild trial stage can leave the chart (degenerate point projection or
    // a field-domain singularity); treat that as a rejection, not an error
    try {
      rhs(y, f, model, opts, k[0]);
      for (int s = 1; s < 7; ++s) {
        for (std::size_t i = 0; i < dim; ++i) {
          double acc = y[i];
          for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
          stage[i] = acc;
        }
        rhs(stage, f, model, opts, k[s]);
      }
    } catch (const ConfigError&) {
      h *= 0.5;
      continue;
    } catch (const EvaluationDomain&) {
      h *= 0.5;
      continue;
    }

    std::vector<double> y5(dim), y4(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double acc5 = y[i], acc4 = y[i];
      for (int s = 0; s < 7; ++s) {
        acc5 += h * kB5[s] * k[s][i];
        acc4 += h * kB4[s] * k[s][i];
      }
      y5[i] = acc5;
      y4[i] = acc4;
    }

    bool scales_positive = true;
    for (std::size_t i = 0; i < p; ++i)
      if (!(y5[i] > 0.0)) scales_positive = false;
    if (!scales_positive) {
      h *= 0.5;
      continue;
    }

    // relative-dominant control: the inverse scales decay over many orders
    // of magnitude and must stay accurate relative to their own size
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double sc = 1e-6 * opts.tol +
                        opts.tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      FlowState next = unpack(y5, state.t + h);
      check_weights(next, f, opts);
      const double grow =
          std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-16),
                                                     -0.2)));
      StepResult out;
      out.state = std::move(next);
      out.dt_used = h;
      out.dt_next = std::min(h * grow, opts.max_step);
      return out;
    }
    h *= std::min(0.9, std::max(0.2, 0.9 * std::pow(err, -0.2)));
  }
  throw StepUnderflow(state.t);
}

FlowState run_flow_to(FlowState state, const ScalarField& f,
                      const ManifoldModel& model, double t_end,
                      const FlowOptions& opts, const FlowObserver& observer) {
  double h = std::min(0.01, std::max(opts.min_step * 10.0, t_end - state.t));
  long long steps = 0;
  while (state.t < t_end - 1e-15) {
    if (++steps > opts.max_steps) break;
    const double dt = std::min(h, t_end - state.t);
    StepResult r = step_flow(state, f, model, dt, opts);
    state = std::move(r.state);
    h = r.dt_next;
    if (observer) observer(state, opts.fixed_matrix
                                      ? *opts.fixed_matrix
                                      : flow_matrix(state, f, model));
  }
  return state;
}

FlowVerdict run_to_verdict(FlowState state, const ScalarField& f,
                           const ManifoldModel& model, double horizon,
                           const FlowOptions& opts,
                           const FlowObserver& observer) {
  if (horizon < 0.0) throw ConfigError("flow horizon must be >= 0");
  const std::vector<SpherePoint> anchors = state.points;

  auto snorm = [](const FlowState& st) {
    double s = 0.0;
    for (double v : st.inv_scales) s += v * v;
    return std::sqrt(s);
  };
  const double s0 = snorm(state);

  double h = 0.01;
  long long steps = 0;
  while (state.t < horizon - 1e-15) {
    if (++steps > opts.max_steps) return FlowVerdict::kUndecided;
    const double dt = std::min(h, horizon - state.t);
    StepResult r = step_flow(state, f, model, dt, opts);
    state = std::move(r.state);
    h = r.dt_next;
    if (observer) observer(state, opts.fixed_matrix
                                      ? *opts.fixed_matrix
                                      : flow_matrix(state, f, model));

    const double sn = snorm(state);
    if (sn < opts.concentrate_factor * s0) return FlowVerdict::kConcentrates;
    if (sn > opts.escape_factor * s0) return FlowVerdict::kEscapes;
    for (std::size_t i = 0; i < state.points.size(); ++i)
      if (geodesic_distance(state.points[i], anchors[i]) > opts.basin_radius)
        return FlowVerdict::kEscapes;
  }
  return FlowVerdict::kUndecided;
}

}  // namespace cpicert
