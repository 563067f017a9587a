// Slice construction and the characteristic-system march.
#include "rarefaction/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rarefaction/errors.hpp"

namespace rarefaction {

namespace {

void check_uniform_grid(const std::vector<double>& u) {
  if (u.size() < 5) throw ConfigError("u grid needs at least 5 nodes");
  if (std::abs(u.front()) > 1e-15) throw ConfigError("u grid must start at 0");
  const double du = u[1] - u[0];
  if (!(du > 0.0)) throw ConfigError("u grid must be increasing");
  for (std::size_t j = 1; j < u.size(); ++j) {
    if (std::abs(u[j] - u[j - 1] - du) > 1e-12 * du)
      throw ConfigError("u grid must be uniform");
  }
}

// Second-order one-sided derivative toward decreasing index (upwind for a
// signal entering from u = 0); the first interior node falls back to the
// centered stencil, which keeps the closure second order there as well.
inline double upwind_du(const std::vector<double>& f, std::size_t j, double du) {
  if (j >= 2) return (3.0 * f[j] - 4.0 * f[j - 1] + f[j - 2]) / (2.0 * du);
  return (f[2] - f[0]) / (2.0 * du);
}

inline double centered_du(const std::vector<double>& f, std::size_t j,
                          double du) {
  const std::size_t n = f.size();
  if (j == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * du);
  if (j == n - 1)
    return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * du);
  return (f[j + 1] - f[j - 1]) / (2.0 * du);
}

struct Fields {
  std::vector<double> w, wbar, r, kev;

  void axpy(const Fields& base, double h, const Fields& k) {
    const std::size_t n = base.w.size();
    for (std::size_t j = 0; j < n; ++j) {
      w[j] = base.w[j] + h * k.w[j];
      wbar[j] = base.wbar[j] + h * k.wbar[j];
      r[j] = base.r[j] + h * k.r[j];
      kev[j] = base.kev[j] + h * k.kev[j];
    }
  }
};

struct TraceSampler {
  const BoundaryDataTable& table;
  double w = 0.0, wbar = 0.0, r = 0.0, kappa = 0.0;

  void load(double t) {
    auto it = std::upper_bound(table.t.begin(), table.t.end(), t);
    std::size_t i1 = static_cast<std::size_t>(it - table.t.begin());
    std::size_t lo = (i1 < 2) ? 0 : i1 - 2;
    if (lo + 4 > table.t.size()) lo = table.t.size() - 4;
    w = wbar = r = kappa = 0.0;
    for (int a = 0; a < 4; ++a) {
      double num = 1.0, den = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        num *= t - table.t[lo + b];
        den *= table.t[lo + a] - table.t[lo + b];
      }
      const double wgt = num / den;
      w += wgt * table.w[lo + a];
      wbar += wgt * table.wbar[lo + a];
      r += wgt * table.r[lo + a];
      kappa += wgt * table.Tkappa[0][lo + a];
    }
  }
};

}  // namespace

double AcousticalGrid::c_at(std::size_t i, std::size_t j) const {
  return (gamma - 1.0) / 2.0 * (wbar[i][j] + w[i][j]);
}

double AcousticalGrid::v_at(std::size_t i, std::size_t j) const {
  return wbar[i][j] - w[i][j];
}

double AcousticalGrid::kappa_geo_at(std::size_t i, std::size_t j) const {
  const double du = u[1] - u[0];
  return -centered_du(r[i], j, du);
}

TaylorData build_taylor_data(const BoundaryDataTable& table, double delta,
                             int N, const std::vector<double>& u_grid) {
  if (N < 1) throw ConfigError("slice order must be at least 1");
  if (table.order < N)
    throw ConfigError("table order is lower than the requested slice order");
  check_uniform_grid(u_grid);
  const double t0 = 1.0 + delta;
  const BoundaryRow row = table.sample(t0);
  const GammaLaw eos(table.gamma);

  TaylorData data;
  data.N = N;
  data.t0 = t0;
  data.gamma = table.gamma;
  data.u = u_grid;
  const std::size_t nn = u_grid.size();
  data.w.resize(nn);
  data.wbar.resize(nn);
  data.r.resize(nn);
  data.kappa.resize(nn);
  data.Lw.resize(nn);
  data.Lwbar.resize(nn);
  data.Lr.resize(nn);

  for (std::size_t j = 0; j < nn; ++j) {
    const double uu = u_grid[j];
    double wv = row.w, wbv = row.wbar;
    double rv = row.r, kv = 0.0;
    double upow = 1.0;  // u^n / n!
    for (int n = 1; n <= N; ++n) {
      upow *= uu / n;
      wv += row.Tw[n - 1] * upow;
      wbv += row.Twbar[n - 1] * upow;
    }
    // Tw_N = du(w_N) evaluated directly from the coefficients.
    double twv = 0.0;
    double upow_d = 1.0;  // u^{n-1} / (n-1)!
    for (int n = 1; n <= N; ++n) {
      twv += row.Tw[n - 1] * upow_d;
      upow_d *= uu / n;
    }
    // kappa_N and its u-antiderivative feeding r_N.
    double kpol = 0.0, kint = 0.0;
    double upow_k = 1.0;  // u^n / n!
    for (int n = 0; n <= N - 1; ++n) {
      kpol += row.Tkappa[n] * upow_k;
      kint += row.Tkappa[n] * upow_k * uu / (n + 1);
      upow_k *= uu / (n + 1);
    }
    rv -= kint;
    kv = kpol;
    if (!(kv > 0.0))
      throw NumericalError(
          "slice radius polynomial folds; the start offset is too small for "
          "this u range");

    const double cv = eos.gm1() / 2.0 * (wbv + wv);
    const double vv = wbv - wv;
    if (!(cv >= kVacuumCMin))
      throw NumericalError("slice data reached vacuum sound speed");
    if (!(rv > 0.0)) throw NumericalError("slice radius must stay positive");

    data.w[j] = wv;
    data.wbar[j] = wbv;
    data.r[j] = rv;
    data.kappa[j] = kv;
    data.Lwbar[j] = -cv * vv / rv;
    data.Lr[j] = cv + vv;
    data.Lw[j] = -cv * vv / rv - 2.0 * cv * twv / kv;
  }
  return data;
}

TaylorData constant_state_data(const FluidState& state, const GammaLaw& eos,
                               double t0, double r0,
                               const std::vector<double>& u_grid) {
  check_uniform_grid(u_grid);
  if (!(state.c >= kVacuumCMin)) throw ConfigError("state must be non-vacuum");
  const InvariantPair inv = to_invariants(state, eos);
  TaylorData data;
  data.N = 1;
  data.t0 = t0;
  data.gamma = eos.gamma();
  data.u = u_grid;
  const std::size_t nn = u_grid.size();
  for (std::size_t j = 0; j < nn; ++j) {
    const double rv = r0 - u_grid[j];
    if (!(rv > 0.0)) throw ConfigError("constant slice radius must stay positive");
    data.w.push_back(inv.w);
    data.wbar.push_back(inv.wbar);
    data.r.push_back(rv);
    data.kappa.push_back(1.0);
    data.Lw.push_back(-state.c * state.v / rv);
    data.Lwbar.push_back(-state.c * state.v / rv);
    data.Lr.push_back(state.c + state.v);
  }
  return data;
}

namespace {

struct MarchWorkspace {
  const GammaLaw eos;
  double du;
  double c_min;
  std::vector<double> kgeo, cval, vval;

  // Derivatives of all fields at one stage; returns (kappa_min, c_max) for
  // the CFL bound and fold/vacuum detection.
  void rhs(const Fields& y, Fields& dy) {
    const std::size_t n = y.w.size();
    kgeo.resize(n);
    cval.resize(n);
    vval.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      kgeo[j] = -centered_du(y.r, j, du);
      if (!(kgeo[j] > 0.0))
        throw NumericalError("characteristic fold: kappa reached zero");
      cval[j] = eos.gm1() / 2.0 * (y.wbar[j] + y.w[j]);
      vval[j] = y.wbar[j] - y.w[j];
      if (!(cval[j] >= c_min))
        throw NumericalError("march reached vacuum sound speed");
      if (!(y.r[j] > 0.0))
        throw NumericalError("march radius collapsed to zero");
    }
    dy.w.resize(n);
    dy.wbar.resize(n);
    dy.r.resize(n);
    dy.kev.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double source = -cval[j] * vval[j] / y.r[j];
      dy.wbar[j] = source;
      dy.r[j] = vval[j] + cval[j];
      dy.w[j] = (j == 0) ? 0.0
                         : source - 2.0 * cval[j] / kgeo[j] *
                               upwind_du(y.w, j, du);
      dy.kev[j] = -eos.gp1() / 2.0 * centered_du(y.wbar, j, du) +
                  (3.0 - eos.gamma()) / 2.0 * centered_du(y.w, j, du);
    }
  }

  double kappa_min() const {
    double m = kgeo[0];
    for (double k : kgeo) m = std::min(m, k);
    return m;
  }
  double c_max() const {
    double m = cval[0];
    for (double c : cval) m = std::max(m, c);
    return m;
  }
};

void pin_trace(Fields& y, TraceSampler& trace, double t) {
  trace.load(t);
  y.w[0] = trace.w;
  y.wbar[0] = trace.wbar;
  y.r[0] = trace.r;
  y.kev[0] = trace.kappa;
}

}  // namespace

AcousticalGrid march(const TaylorData& data, const BoundaryDataTable& table,
                     double t_end, double dt_max, const MarchOptions& opts) {
  check_uniform_grid(data.u);
  if (!(t_end > data.t0)) throw ConfigError("march must advance in time");
  if (!(dt_max > 0.0)) throw ConfigError("march step cap must be positive");
  if (!(opts.cfl_factor > 0.0) || opts.cfl_factor > 0.9)
    throw ConfigError("cfl factor must lie in (0, 0.9]");
  if (opts.max_rows < 4) throw ConfigError("march needs a row budget of >= 4");
  if (table.t.size() < 4 || table.t.front() > data.t0 ||
      table.t.back() < t_end)
    throw ConfigError("trace table does not cover the march time span");

  const GammaLaw eos(data.gamma);
  const double du = data.u[1] - data.u[0];
  MarchWorkspace ws{eos, du, opts.c_min, {}, {}, {}};
  TraceSampler trace{table};

  Fields y{data.w, data.wbar, data.r, data.kappa};
  pin_trace(y, trace, data.t0);

  AcousticalGrid grid;
  grid.gamma = data.gamma;
  grid.u = data.u;
  grid.dt_min = dt_max;
  grid.dt_max = 0.0;

  // Row storage: keep every stride-th step; when the budget fills, drop every
  // other stored row and double the stride. Rows then sit at steps that are
  // multiples of the final stride, plus the forced last row.
  auto store_row = [&](double t, const Fields& f) {
    grid.t.push_back(t);
    grid.w.push_back(f.w);
    grid.wbar.push_back(f.wbar);
    grid.r.push_back(f.r);
    grid.kappa.push_back(f.kev);
  };
  std::size_t stride = 1;
  auto compact_rows = [&]() {
    std::size_t keep = 0;
    for (std::size_t i = 0; i < grid.t.size(); i += 2) {
      if (keep != i) {
        grid.t[keep] = grid.t[i];
        grid.w[keep] = std::move(grid.w[i]);
        grid.wbar[keep] = std::move(grid.wbar[i]);
        grid.r[keep] = std::move(grid.r[i]);
        grid.kappa[keep] = std::move(grid.kappa[i]);
      }
      ++keep;
    }
    grid.t.resize(keep);
    grid.w.resize(keep);
    grid.wbar.resize(keep);
    grid.r.resize(keep);
    grid.kappa.resize(keep);
    stride *= 2;
  };
  std::size_t cfl_stride = 1, cfl_step = 0;

  store_row(data.t0, y);

  Fields k1, k2, k3, k4, tmp = y;
  double t = data.t0;
  const double t_eps = 1e-12 * std::max(1.0, t_end);

  while (t < t_end - t_eps) {
    ws.rhs(y, k1);
    double dt = std::min(dt_max, opts.cfl_factor * du * ws.kappa_min() /
                                     (2.0 * ws.c_max()));
    if (!(dt > 0.0)) throw NumericalError("march step collapsed to zero");
    if (t + dt > t_end) dt = t_end - t;

    if (cfl_step % cfl_stride == 0) {
      if (grid.cfl_t.size() >= opts.max_rows) {
        std::size_t keep = 0;
        for (std::size_t i = 0; i < grid.cfl_t.size(); i += 2) {
          grid.cfl_t[keep] = grid.cfl_t[i];
          grid.cfl_dt[keep] = grid.cfl_dt[i];
          grid.cfl_kappa_min[keep] = grid.cfl_kappa_min[i];
          grid.cfl_c_max[keep] = grid.cfl_c_max[i];
          ++keep;
        }
        grid.cfl_t.resize(keep);
        grid.cfl_dt.resize(keep);
        grid.cfl_kappa_min.resize(keep);
        grid.cfl_c_max.resize(keep);
        cfl_stride *= 2;
      }
      if (cfl_step % cfl_stride == 0) {
        grid.cfl_t.push_back(t);
        grid.cfl_dt.push_back(dt);
        grid.cfl_kappa_min.push_back(ws.kappa_min());
        grid.cfl_c_max.push_back(ws.c_max());
      }
    }
    ++cfl_step;

    tmp.axpy(y, 0.5 * dt, k1);
    pin_trace(tmp, trace, t + 0.5 * dt);
    ws.rhs(tmp, k2);
    tmp.axpy(y, 0.5 * dt, k2);
    pin_trace(tmp, trace, t + 0.5 * dt);
    ws.rhs(tmp, k3);
    tmp.axpy(y, dt, k3);
    pin_trace(tmp, trace, t + dt);
    ws.rhs(tmp, k4);

    const std::size_t n = y.w.size();
    for (std::size_t j = 0; j < n; ++j) {
      y.w[j] += dt / 6.0 * (k1.w[j] + 2.0 * k2.w[j] + 2.0 * k3.w[j] + k4.w[j]);
      y.wbar[j] += dt / 6.0 *
                   (k1.wbar[j] + 2.0 * k2.wbar[j] + 2.0 * k3.wbar[j] + k4.wbar[j]);
      y.r[j] += dt / 6.0 * (k1.r[j] + 2.0 * k2.r[j] + 2.0 * k3.r[j] + k4.r[j]);
      y.kev[j] +=
          dt / 6.0 * (k1.kev[j] + 2.0 * k2.kev[j] + 2.0 * k3.kev[j] + k4.kev[j]);
    }
    t += dt;
    ++grid.steps;
    grid.dt_min = std::min(grid.dt_min, dt);
    grid.dt_max = std::max(grid.dt_max, dt);

    // Evolved-vs-pinned monitors at u = 0, then re-pin.
    trace.load(t);
    grid.wbar_pin_gap_max =
        std::max(grid.wbar_pin_gap_max, std::abs(y.wbar[0] - trace.wbar));
    y.w[0] = trace.w;
    y.wbar[0] = trace.wbar;
    y.r[0] = trace.r;
    y.kev[0] = trace.kappa;

    for (std::size_t j = 0; j < n; ++j) {
      const double kg = -centered_du(y.r, j, du);
      grid.kappa_consistency_max =
          std::max(grid.kappa_consistency_max, std::abs(y.kev[j] - kg));
    }

    if (grid.steps % stride == 0) {
      if (grid.t.size() >= opts.max_rows) compact_rows();
      store_row(t, y);
    }
  }
  if (grid.t.back() < t - t_eps) {
    if (grid.t.size() >= opts.max_rows) compact_rows();
    store_row(t, y);
  }

  // Final fold/monotonicity sweep over stored rows.
  for (std::size_t i = 0; i < grid.t.size(); ++i) {
    for (std::size_t j = 1; j < grid.u.size(); ++j) {
      if (!(grid.r[i][j] < grid.r[i][j - 1]))
        throw NumericalError("stored radius is not strictly decreasing in u");
    }
  }
  return grid;
}

ResidualReport residuals(const AcousticalGrid& grid) {
  const std::size_t nt = grid.t.size();
  const std::size_t nu = grid.u.size();
  if (nt < 3) throw ConfigError("residuals need at least 3 stored rows");
  const double du = grid.u[1] - grid.u[0];

  ResidualReport rep;
  double s_wbar = 0.0, s_r = 0.0, s_w = 0.0;
  std::size_t n_wbar = 0, n_w = 0;

  for (std::size_t i = 1; i + 1 < nt; ++i) {
    const double t0 = grid.t[i - 1], t1 = grid.t[i], t2 = grid.t[i + 1];
    // Quadratic-interpolant derivative weights at the middle node.
    // Derivative weights of the interpolating quadratic sum to zero, so they
    // are applied to differences from the middle node: this keeps the
    // reconstruction well conditioned when the row times carry rounding.
    const double d0 = (t1 - t2) / ((t0 - t1) * (t0 - t2));
    const double d2 = (t1 - t0) / ((t2 - t0) * (t2 - t1));
    for (std::size_t j = 0; j < nu; ++j) {
      const double c = grid.c_at(i, j);
      const double v = grid.v_at(i, j);
      const double r = grid.r[i][j];
      const double kg = grid.kappa_geo_at(i, j);
      const double Lwbar = d0 * (grid.wbar[i - 1][j] - grid.wbar[i][j]) +
                           d2 * (grid.wbar[i + 1][j] - grid.wbar[i][j]);
      const double Lr = d0 * (grid.r[i - 1][j] - grid.r[i][j]) +
                        d2 * (grid.r[i + 1][j] - grid.r[i][j]);
      const double res_wbar = std::abs(Lwbar + c * v / r);
      const double res_r = std::abs(Lr - (v + c));
      rep.max_wbar = std::max(rep.max_wbar, res_wbar);
      rep.max_r = std::max(rep.max_r, res_r);
      s_wbar += res_wbar * res_wbar;
      s_r += res_r * res_r;
      ++n_wbar;
      if (j > 0 && j + 1 < nu) {
        const double Lw = d0 * (grid.w[i - 1][j] - grid.w[i][j]) +
                          d2 * (grid.w[i + 1][j] - grid.w[i][j]);
        const double Tw = (grid.w[i][j + 1] - grid.w[i][j - 1]) / (2.0 * du);
        const double res_w = std::abs(2.0 * Tw + kg / c * Lw + kg * v / r);
        rep.max_w = std::max(rep.max_w, res_w);
        s_w += res_w * res_w;
        ++n_w;
      }
    }
  }
  if (n_wbar == 0 || n_w == 0)
    throw ConfigError("residuals found no interior points");
  rep.rms_wbar = std::sqrt(s_wbar / n_wbar);
  rep.rms_r = std::sqrt(s_r / n_wbar);
  rep.rms_w = std::sqrt(s_w / n_w);
  return rep;
}

}  // namespace rarefaction
