#include "dipolesim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dipolesim/errors.hpp"

namespace dipolesim {
namespace {

// Dormand–Prince 5(4) tableau. Row 7 of a equals b: the last stage of an
// accepted step is the first stage of the next (FSAL).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                           -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                           -5103.0 / 18656};
constexpr double kB[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                          -2187.0 / 6784, 11.0 / 84};
// b − b̂ (5th-order weights minus the embedded 4th-order ones).
constexpr double kE[7] = {71.0 / 57600, 0.0,           -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

struct Stepper {
  const MasterEquation& eq;
  IntegrationStats& stats;
  RhsWorkspace ws;
  Dense k[7], ytmp, yerr;
  std::size_t nsq;

  Stepper(const MasterEquation& e, IntegrationStats& s) : eq(e), stats(s) {
    const int d = e.dim();
    for (auto& m : k) m.resize(d, d);
    ytmp.resize(d, d);
    yerr.resize(d, d);
    nsq = static_cast<std::size_t>(d) * d;
  }

  void rhs(double t, const Dense& y, Dense& out) {
    eq.rhs(t, y, out, ws);
    ++stats.rhs_evaluations;
  }

  void stage(Dense& out, const Dense& y, double h, int nterms, const double* a) {
    double c[6];
    const cplx* terms[6];
    for (int i = 0; i < nterms; ++i) {
      c[i] = h * a[i];
      terms[i] = k[i].data();
    }
    simd().rk_combine(nsq, out.data(), y.data(), nterms, c, terms);
  }

  // One trial step from (t, y) with size h; k[0] must hold f(t, y). On
  // success ytmp holds the 5th-order result, k[6] its derivative, and the
  // weighted RMS error is returned.
  double attempt(double t, const Dense& y, double h) {
    stage(ytmp, y, h, 1, kA2);
    rhs(t + kC[1] * h, ytmp, k[1]);
    stage(ytmp, y, h, 2, kA3);
    rhs(t + kC[2] * h, ytmp, k[2]);
    stage(ytmp, y, h, 3, kA4);
    rhs(t + kC[3] * h, ytmp, k[3]);
    stage(ytmp, y, h, 4, kA5);
    rhs(t + kC[4] * h, ytmp, k[4]);
    stage(ytmp, y, h, 5, kA6);
    rhs(t + kC[5] * h, ytmp, k[5]);
    stage(ytmp, y, h, 6, kB);  // 5th-order solution
    rhs(t + h, ytmp, k[6]);

    yerr.setZero();
    double c[6];
    const cplx* terms[6];
    int nt = 0;
    for (int i = 0; i < 7; ++i) {
      if (kE[i] == 0.0) continue;
      c[nt] = h * kE[i];
      terms[nt] = k[i].data();
      ++nt;
    }
    simd().rk_combine(nsq, yerr.data(), yerr.data(), nt, c, terms);

    const double sumsq = simd().wrms_error_sq(nsq, yerr.data(), y.data(),
                                              ytmp.data(), /*atol=*/atol,
                                              /*rtol=*/rtol);
    return std::sqrt(sumsq / static_cast<double>(nsq));
  }

  double atol = 1e-10, rtol = 1e-8;
};

double scaled_norm(const Dense& v, const Dense& ref, double atol, double rtol) {
  const std::size_t n = static_cast<std::size_t>(ref.size());
  const double s =
      simd().wrms_error_sq(n, v.data(), ref.data(), ref.data(), atol, rtol);
  return std::sqrt(s / static_cast<double>(n));
}

// Starting step size following the usual embedded-RK heuristic: balance the
// size of the state against its derivative, refine with one Euler probe.
double initial_step_size(Stepper& st, double t0, double span, const Dense& y0) {
  const double d0 = scaled_norm(y0, y0, st.atol, st.rtol);
  const double d1 = scaled_norm(st.k[0], y0, st.atol, st.rtol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  const cplx* term = st.k[0].data();
  simd().rk_combine(st.nsq, st.ytmp.data(), y0.data(), 1, &h0, &term);
  st.rhs(t0 + h0, st.ytmp, st.k[1]);
  st.yerr = st.k[1] - st.k[0];
  const double d2 = scaled_norm(st.yerr, y0, st.atol, st.rtol) / h0;

  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

Trajectory evolve(const MasterEquation& eq, const DensityState& initial,
                  double t0, double t1, const IntegratorOptions& opts) {
  if (!(t1 > t0)) throw invalid_argument_error("evolve needs t1 > t0");
  if (initial.dim() != eq.dim())
    throw invalid_argument_error("initial state dimension does not match the basis");
  validate_state(initial);
  for (std::size_t i = 0; i < opts.sample_times.size(); ++i) {
    const double s = opts.sample_times[i];
    if (s < t0 || s > t1 || (i > 0 && s <= opts.sample_times[i - 1]))
      throw invalid_argument_error(
          "sample times must be strictly increasing within [t0, t1]");
  }

  Trajectory out;
  Stepper st(eq, out.stats);
  st.atol = opts.abs_tol;
  st.rtol = opts.rel_tol;

  Dense y = initial.rho;
  double t = t0;
  const double span = t1 - t0;

  std::size_t next_sample = 0;
  auto record = [&](double time) {
    out.times.push_back(time);
    out.states.push_back(y);
  };
  while (next_sample < opts.sample_times.size() &&
         opts.sample_times[next_sample] <= t0 + 1e-14 * std::max(1.0, std::abs(t0))) {
    record(t0);
    ++next_sample;
  }

  st.rhs(t0, y, st.k[0]);
  double h_prop = opts.initial_step > 0.0 ? opts.initial_step
                                          : initial_step_size(st, t0, span, y);
  if (opts.max_step > 0.0) h_prop = std::min(h_prop, opts.max_step);

  const double h_floor = 1e-14 * span;
  bool done = false;
  while (!done) {
    if (out.stats.steps_accepted + out.stats.steps_rejected >= opts.max_steps)
      throw integration_failure_error(
          "step budget of " + std::to_string(opts.max_steps) +
          " exhausted at t = " + std::to_string(t) + " (of " +
          std::to_string(t1) + ")");

    double h = h_prop;
    double next_stop = t1;
    if (next_sample < opts.sample_times.size())
      next_stop = std::min(next_stop, opts.sample_times[next_sample]);
    const bool clipped = t + h >= next_stop;
    if (clipped) h = next_stop - t;

    const double err = st.attempt(t, y, h);
    if (!(err <= 1.0)) {  // rejected (covers NaN/Inf from an oversized step)
      ++out.stats.steps_rejected;
      const double fac = std::isfinite(err)
                             ? std::max(0.1, 0.9 * std::pow(err, -0.2))
                             : 0.1;
      h_prop = h * std::min(fac, 1.0);
      if (h_prop < h_floor)
        throw stiffness_error(
            "step size underflow at t = " + std::to_string(t) +
            " (h = " + std::to_string(h_prop) +
            "); the system is too stiff for these tolerances — loosen "
            "rel_tol/abs_tol or use a steady-state solver");
      continue;
    }

    ++out.stats.steps_accepted;
    t = clipped ? next_stop : t + h;
    y.swap(st.ytmp);
    st.k[0].swap(st.k[6]);  // FSAL: derivative at the new state

    hermitize(y);
    const double tr = trace_normalize(y);
    const double drift = std::abs(tr - 1.0);
    out.stats.trace_correction += drift;
    if (drift > 1e-6)
      throw integration_failure_error(
          "trace drifted by " + std::to_string(drift) +
          " in one step at t = " + std::to_string(t) +
          "; invariants are no longer reliable");

    const double fac =
        std::clamp(err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h_prop = h * fac;
    if (opts.max_step > 0.0) h_prop = std::min(h_prop, opts.max_step);

    if (next_sample < opts.sample_times.size() &&
        t >= opts.sample_times[next_sample]) {
      record(opts.sample_times[next_sample]);
      ++next_sample;
    }

    if (opts.stop_below_residual > 0.0) {
      const double res = std::sqrt(simd().znorm2sq(st.nsq, st.k[0].data()));
      out.stats.final_residual = res;
      if (res < opts.stop_below_residual) {
        out.stats.stopped_on_residual = true;
        done = true;
      }
    }
    if (t >= t1) done = true;
  }

  out.stats.final_residual = std::sqrt(simd().znorm2sq(st.nsq, st.k[0].data()));
  if (out.times.empty() || out.times.back() != t) {
    out.times.push_back(t);
    out.states.push_back(y);
  }
  return out;
}

}  // namespace dipolesim
