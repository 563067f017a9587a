// Joint integration of the boundary-curve ODE hierarchy and the
// derivative-cell algebra feeding it.
#include "rarefaction/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "rarefaction/errors.hpp"

namespace rarefaction {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int steps_for(double width, double step) {
  if (!(step > 0.0)) throw ConfigError("integration step must be positive");
  if (!(width > 0.0)) throw ConfigError("integration span must be increasing");
  int n = static_cast<int>(std::ceil(width / step - 1e-9));
  return std::max(n, 1);
}

}  // namespace

C0CellEvaluator::C0CellEvaluator(const GammaLaw& eos, int N)
    : eos_(eos), N_(N), dim_(N + 2) {
  if (N < 1) throw ConfigError("cell evaluator order must be at least 1");
  binom_.assign(dim_ + 1, std::vector<double>(dim_ + 1, 0.0));
  for (int i = 0; i <= dim_; ++i) {
    binom_[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      binom_[i][j] = binom_[i - 1][j - 1] + (j <= i - 1 ? binom_[i - 1][j] : 0.0);
  }
  const std::size_t cells = static_cast<std::size_t>(dim_) * dim_;
  for (auto* g : {&w_, &wbar_, &kappa_, &r_, &c_, &v_, &sq_, &rec_r_, &rec_c_, &p_})
    g->assign(cells, kNaN);
}

double C0CellEvaluator::cell(const std::vector<double>& g, int i, int m) const {
  return g[static_cast<std::size_t>(i) * dim_ + m];
}

double& C0CellEvaluator::cell(std::vector<double>& g, int i, int m) {
  return g[static_cast<std::size_t>(i) * dim_ + m];
}

// Two-dimensional Leibniz product: cell (i, m) of f*g.
double C0CellEvaluator::conv(const std::vector<double>& f,
                             const std::vector<double>& g, int i, int m) const {
  double acc = 0.0;
  for (int j = 0; j <= i; ++j) {
    const double bi = binom_[i][j];
    for (int n = 0; n <= m; ++n)
      acc += bi * binom_[m][n] * cell(f, j, n) * cell(g, i - j, m - n);
  }
  return acc;
}

void C0CellEvaluator::evaluate(const BackgroundProvider& provider, double t,
                               const std::vector<double>& state) {
  if (static_cast<int>(state.size()) != 2 * N_)
    throw ConfigError("cell evaluator state size mismatch");
  const double gm1 = eos_.gm1();
  const double gp1 = eos_.gp1();
  const int D = N_ + 1;  // max total degree i + m handled
  provider.jets(t, D, jc_, jv_, jr_);

  for (auto* g : {&w_, &wbar_, &kappa_, &r_, &c_, &v_, &sq_, &rec_r_, &rec_c_, &p_})
    std::fill(g->begin(), g->end(), kNaN);

  for (int d = 0; d <= D; ++d) {
    // Radius cells: the pure trace column is a provider jet; one T peels off
    // to a kappa cell of lower degree.
    for (int i = std::min(d, N_); i >= 0; --i) {
      const int m = d - i;
      if (i == 0)
        cell(r_, 0, m) = jr_[m];
      else
        cell(r_, i, m) = -cell(kappa_, i - 1, m);
    }

    // Ingoing-invariant cells: trace column from provider jets, T-columns
    // from the ODE state, L-columns from the stored transport product of the
    // previous degree.
    for (int i = 0; i <= std::min(d, N_); ++i) {
      const int m = d - i;
      if (m == 0) {
        if (i == 0)
          cell(wbar_, 0, 0) = jc_[0] / gm1 + jv_[0] / 2.0;
        else
          cell(wbar_, i, 0) = state[i - 1];
      } else {
        cell(wbar_, i, m) = cell(p_, i, m - 1);
      }
    }

    // Outgoing-invariant cells, ascending T-index: each T-application is a
    // sum of products of lower cells against kappa cells, so no division by
    // kappa ever occurs.
    for (int i = 0; i <= std::min(d, N_); ++i) {
      const int m = d - i;
      if (i == 0) {
        cell(w_, 0, m) = jc_[m] / gm1 - jv_[m] / 2.0;
        continue;
      }
      double acc = 0.0;
      for (int k = 0; k <= i - 1; ++k) {
        const double bk = binom_[i - 1][k];
        for (int m1 = 0; m1 <= m; ++m1) {
          // G(k, m1): cell of v/r + (Lw)/c.
          double gcell = 0.0;
          for (int j = 0; j <= k; ++j) {
            const double bj = binom_[k][j];
            for (int n = 0; n <= m1; ++n) {
              const double bb = bj * binom_[m1][n];
              gcell += bb * cell(v_, j, n) * cell(rec_r_, k - j, m1 - n);
              gcell += bb * cell(w_, j, n + 1) * cell(rec_c_, k - j, m1 - n);
            }
          }
          acc += bk * binom_[m][m1] * gcell * cell(kappa_, i - 1 - k, m - m1);
        }
      }
      cell(w_, i, m) = -0.5 * acc;
    }

    // Kappa cells: T-columns from the ODE state, L-columns from the linear
    // relation against the invariants one T-order up.
    for (int i = 0; i <= std::min(d, N_ - 1); ++i) {
      const int m = d - i;
      if (m == 0)
        cell(kappa_, i, 0) = (i == 0 && d == 0) ? state[N_] : state[N_ + i];
      else
        cell(kappa_, i, m) = -gp1 / 2.0 * cell(wbar_, i + 1, m - 1) +
                             (3.0 - eos_.gamma()) / 2.0 * cell(w_, i + 1, m - 1);
    }

    // Derived grids at this degree: sound speed, velocity, invariant-square
    // difference, reciprocals, and the ingoing transport product.
    for (int i = 0; i <= std::min(d, N_); ++i) {
      const int m = d - i;
      cell(c_, i, m) = gm1 / 2.0 * (cell(wbar_, i, m) + cell(w_, i, m));
      cell(v_, i, m) = cell(wbar_, i, m) - cell(w_, i, m);
      cell(sq_, i, m) = conv(wbar_, wbar_, i, m) - conv(w_, w_, i, m);
      if (i == 0 && m == 0) {
        if (!(cell(r_, 0, 0) > 0.0))
          throw NumericalError("boundary curve radius must stay positive");
        if (!(cell(c_, 0, 0) >= kVacuumCMin))
          throw NumericalError("sound speed on boundary curve reached vacuum");
        cell(rec_r_, 0, 0) = 1.0 / cell(r_, 0, 0);
        cell(rec_c_, 0, 0) = 1.0 / cell(c_, 0, 0);
      } else {
        double accr = 0.0, accc = 0.0;
        for (int j = 0; j <= i; ++j) {
          const double bj = binom_[i][j];
          for (int n = 0; n <= m; ++n) {
            if (j == i && n == m) continue;
            const double bb = bj * binom_[m][n];
            accr += bb * cell(r_, i - j, m - n) * cell(rec_r_, j, n);
            accc += bb * cell(c_, i - j, m - n) * cell(rec_c_, j, n);
          }
        }
        cell(rec_r_, i, m) = -accr / cell(r_, 0, 0);
        cell(rec_c_, i, m) = -accc / cell(c_, 0, 0);
      }
      cell(p_, i, m) = -gm1 / 2.0 * conv(sq_, rec_r_, i, m);
    }
  }
}

namespace {

// Right-hand side of the joint system: d/dt of (T^n wbar, T^{n-1} kappa).
void rhs(C0CellEvaluator& cells, const BackgroundProvider& provider, double t,
         const std::vector<double>& y, std::vector<double>& dy) {
  cells.evaluate(provider, t, y);
  const int N = cells.order();
  dy.resize(2 * static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    dy[n - 1] = cells.wbar(n, 1);
    dy[N + n - 1] = cells.kappa(n - 1, 1);
  }
}

void append_row(BoundaryDataTable& table, const C0CellEvaluator& cells,
                double t) {
  const int N = table.order;
  table.t.push_back(t);
  table.w.push_back(cells.w(0, 0));
  table.wbar.push_back(cells.wbar(0, 0));
  table.r.push_back(cells.r(0, 0));
  table.c.push_back(cells.c(0, 0));
  table.v.push_back(cells.v(0, 0));
  table.Lw.push_back(cells.w(0, 1));
  table.Lwbar.push_back(cells.wbar(0, 1));
  for (int n = 1; n <= N; ++n) {
    table.Tw[n - 1].push_back(cells.w(n, 0));
    table.Twbar[n - 1].push_back(cells.wbar(n, 0));
    table.Tkappa[n - 1].push_back(cells.kappa(n - 1, 0));
    table.LTw[n - 1].push_back(cells.w(n, 1));
    table.LTwbar[n - 1].push_back(cells.wbar(n, 1));
    table.LTkappa[n - 1].push_back(cells.kappa(n - 1, 1));
  }
}

// Core driver. Integrates in local time s = t - 1 from s0 = kDelta0 through
// the segment list, storing a row at every node with s >= store_from - 1.
BoundaryDataTable run_joint(std::shared_ptr<const BackgroundProvider> provider,
                            int N, const std::vector<StepSegment>& segments,
                            double store_from) {
  if (!provider) throw ConfigError("boundary solve requires a provider");
  if (N < 1) throw ConfigError("boundary solve order must be at least 1");
  if (segments.empty()) throw ConfigError("boundary solve needs a segment list");
  if (provider->max_jet_order() < N + 1)
    throw ConfigError("provider jet order too low for requested boundary order");

  const GammaLaw& eos = provider->eos();
  C0CellEvaluator cells(eos, N);

  BoundaryDataTable table;
  table.order = N;
  table.gamma = eos.gamma();
  table.segments = segments;
  table.provider = provider;
  table.Tw.resize(N);
  table.Twbar.resize(N);
  table.Tkappa.resize(N);
  table.LTw.resize(N);
  table.LTwbar.resize(N);
  table.LTkappa.resize(N);

  // Exact corner data. The right-hand side stays regular at the corner (the
  // cell evaluator divides only by c and r), so one RK4 step of size kDelta0
  // from s = 0 reaches the working start offset with O(kDelta0^5) error.
  std::vector<double> y(2 * static_cast<std::size_t>(N), 0.0);
  y[0] = -2.0 / eos.gp1();

  std::vector<double> k1, k2, k3, k4, tmp(y.size());
  {
    const double h = kDelta0;
    rhs(cells, *provider, 1.0, y, k1);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(cells, *provider, 1.0 + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(cells, *provider, 1.0 + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
    rhs(cells, *provider, 1.0 + h, tmp, k4);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  double s = kDelta0;
  const double store_from_s = store_from - 1.0;

  for (const auto& seg : segments) {
    const double s_end = seg.t_end - 1.0;
    if (!(s_end > s))
      throw ConfigError("boundary solve segments must advance in time");
    const int steps = steps_for(s_end - s, seg.step);
    const double h = (s_end - s) / steps;
    for (int k = 0; k < steps; ++k) {
      rhs(cells, *provider, 1.0 + s, y, k1);
      if (s >= store_from_s * (1.0 - 1e-12)) append_row(table, cells, 1.0 + s);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(cells, *provider, 1.0 + s + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(cells, *provider, 1.0 + s + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
      rhs(cells, *provider, 1.0 + s + h, tmp, k4);
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      s += h;
    }
    s = s_end;  // suppress accumulated roundoff at segment joins
  }
  rhs(cells, *provider, 1.0 + s, y, k1);
  append_row(table, cells, 1.0 + s);

  if (table.t.size() < 4)
    throw ConfigError("boundary solve stored fewer than four rows");
  return table;
}

}  // namespace

BoundaryDataTable solve_c0(std::shared_ptr<const BackgroundProvider> provider,
                           int N, const std::vector<StepSegment>& segments) {
  return run_joint(std::move(provider), N, segments, 0.0);
}

BoundaryDataTable solve_c0(std::shared_ptr<const BackgroundProvider> provider,
                           int N, double t_end, double step) {
  return solve_c0(std::move(provider), N, {StepSegment{t_end, step}});
}

BoundaryDataTable solve_c0_geometric(
    std::shared_ptr<const BackgroundProvider> provider, int N, double t_loc_lo,
    double t_loc_hi, int steps_per_decade) {
  if (!(t_loc_lo > kDelta0 * 10.0) || !(t_loc_hi > t_loc_lo))
    throw ConfigError("geometric solve window must sit above the seed offset");
  if (steps_per_decade < 16)
    throw ConfigError("geometric solve needs at least 16 steps per decade");
  std::vector<StepSegment> segments;
  double lo = kDelta0;
  while (lo < t_loc_hi * (1.0 - 1e-12)) {
    const double hi = std::min(lo * 10.0, t_loc_hi);
    segments.push_back(StepSegment{1.0 + hi, (hi - lo) / steps_per_decade});
    lo = hi;
  }
  return run_joint(std::move(provider), N, segments, 1.0 + t_loc_lo / 10.0);
}

BoundaryDataTable solve_order1(std::shared_ptr<const BackgroundProvider> provider,
                               double t_span0, double t_span1, double step) {
  if (std::abs(t_span0 - 1.0) > 1e-12)
    throw ConfigError("first-order solve must start at the corner time 1");
  return solve_c0(std::move(provider), 1, t_span1, step);
}

BoundaryDataTable solve_orderN(std::shared_ptr<const BackgroundProvider> provider,
                               const BoundaryDataTable& lower, double step) {
  if (lower.order < 1) throw ConfigError("lower table is empty");
  if (lower.segments.empty())
    throw ConfigError("lower table carries no segment metadata");
  if (std::abs(step - lower.segments.back().step) >
      1e-12 * lower.segments.back().step)
    throw ConfigError("extension step must match the lower table's grid");
  BoundaryDataTable next = run_joint(std::move(provider), lower.order + 1,
                                     lower.segments, 0.0);
  if (next.t.size() != lower.t.size())
    throw NumericalError("extension grid does not match the lower table");
  for (int n = 1; n <= lower.order; ++n) {
    for (std::size_t i = 0; i < lower.t.size(); ++i) {
      const double a = lower.Twbar[n - 1][i], b = next.Twbar[n - 1][i];
      const double ka = lower.Tkappa[n - 1][i], kb = next.Tkappa[n - 1][i];
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)) ||
          std::abs(ka - kb) > 1e-12 * (1.0 + std::abs(ka)))
        throw NumericalError("order extension changed lower-order columns");
    }
  }
  return next;
}

BoundaryRow BoundaryDataTable::sample(double at) const {
  if (t.size() < 4) throw ConfigError("table too short to sample");
  if (at < t.front() - 1e-12 || at > t.back() + 1e-12)
    throw ConfigError("sample time outside the stored table range");
  auto it = std::upper_bound(t.begin(), t.end(), at);
  std::size_t i1 = static_cast<std::size_t>(it - t.begin());
  std::size_t lo = (i1 < 2) ? 0 : i1 - 2;
  if (lo + 4 > t.size()) lo = t.size() - 4;

  double wgt[4];
  for (int a = 0; a < 4; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      num *= at - t[lo + b];
      den *= t[lo + a] - t[lo + b];
    }
    wgt[a] = num / den;
  }
  auto interp = [&](const std::vector<double>& col) {
    return wgt[0] * col[lo] + wgt[1] * col[lo + 1] + wgt[2] * col[lo + 2] +
           wgt[3] * col[lo + 3];
  };

  BoundaryRow row;
  row.t = at;
  row.w = interp(w);
  row.wbar = interp(wbar);
  row.r = interp(r);
  row.c = interp(c);
  row.v = interp(v);
  row.Lw = interp(Lw);
  row.Lwbar = interp(Lwbar);
  row.Tw.resize(order);
  row.Twbar.resize(order);
  row.Tkappa.resize(order);
  row.LTw.resize(order);
  row.LTwbar.resize(order);
  row.LTkappa.resize(order);
  for (int n = 0; n < order; ++n) {
    row.Tw[n] = interp(Tw[n]);
    row.Twbar[n] = interp(Twbar[n]);
    row.Tkappa[n] = interp(Tkappa[n]);
    row.LTw[n] = interp(LTw[n]);
    row.LTwbar[n] = interp(LTwbar[n]);
    row.LTkappa[n] = interp(LTkappa[n]);
  }
  return row;
}

double BoundaryDataTable::sample_kappa(double at) const {
  if (t.size() < 4) throw ConfigError("table too short to sample");
  if (at < t.front() - 1e-12 || at > t.back() + 1e-12)
    throw ConfigError("sample time outside the stored table range");
  auto it = std::upper_bound(t.begin(), t.end(), at);
  std::size_t i1 = static_cast<std::size_t>(it - t.begin());
  std::size_t lo = (i1 < 2) ? 0 : i1 - 2;
  if (lo + 4 > t.size()) lo = t.size() - 4;
  const std::vector<double>& col = Tkappa[0];
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      num *= at - t[lo + b];
      den *= t[lo + a] - t[lo + b];
    }
    acc += num / den * col[lo + a];
  }
  return acc;
}

double SingularSeries::bound_constant() const {
  double best = 0.0;
  for (double an : a) best = std::max(best, an);
  return best;
}

SingularSeries singular_series(double g0, const GammaLaw& eos, double c0, int N) {
  if (!(c0 > 0.0)) throw ConfigError("corner sound speed must be positive");
  if (N < 0) throw ConfigError("series order must be nonnegative");
  SingularSeries out;
  out.lambda = eos.gm1() / eos.gp1();
  out.c0 = c0;
  out.g.resize(N + 1);
  out.a.resize(N + 1);
  out.g[0] = g0;
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    double fact = 1.0;      // i!
    double lam_pow = 1.0;   // lambda^i
    double c_pow = 1.0 / c0;  // c0^{-(i+1)}
    for (int i = 0; i <= n - 1; ++i) {
      if (i > 0) {
        fact *= i;
        lam_pow *= out.lambda;
        c_pow /= c0;
      }
      acc += fact * lam_pow * c_pow * out.g[n - 1 - i];
    }
    out.g[n] = -0.5 * acc;
  }
  double nfact = 1.0;
  double lam_n = 1.0;
  double c_n = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      nfact *= n;
      lam_n *= out.lambda;
      c_n *= c0;
    }
    out.a[n] = std::abs(c_n * out.g[n] / (lam_n * nfact));
  }
  return out;
}

std::vector<VanishingFit> vanishing_orders(const BoundaryDataTable& table,
                                           double fit_lo, double fit_hi) {
  if (!(fit_lo > 0.0) || !(fit_hi > fit_lo))
    throw ConfigError("vanishing-order fit window is invalid");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    const double s = table.t[i] - 1.0;
    if (s >= fit_lo && s <= fit_hi) rows.push_back(i);
  }
  if (rows.size() < 8)
    throw ConfigError("vanishing-order fit window covers too few rows");

  const double gp1 = table.gamma + 1.0;
  struct Column {
    std::string name;
    int target;
    std::vector<double> y;
  };
  std::vector<Column> columns;
  auto add = [&](std::string name, int target, auto&& value_at) {
    Column col;
    col.name = std::move(name);
    col.target = target;
    col.y.reserve(rows.size());
    for (std::size_t i : rows) col.y.push_back(value_at(i));
    columns.push_back(std::move(col));
  };

  for (int n = 1; n <= table.order; ++n) {
    add("T" + std::to_string(n) + "w", 1,
        [&](std::size_t i) { return table.Tw[n - 1][i]; });
    if (n == 1) {
      add("T1wbar_offset", 1,
          [&](std::size_t i) { return table.Twbar[0][i] + 2.0 / gp1; });
      add("kappa_minus_local_time", 2,
          [&](std::size_t i) { return table.Tkappa[0][i] - (table.t[i] - 1.0); });
    } else {
      add("T" + std::to_string(n) + "wbar", 1,
          [&](std::size_t i) { return table.Twbar[n - 1][i]; });
      add("T" + std::to_string(n - 1) + "kappa", 2,
          [&](std::size_t i) { return table.Tkappa[n - 1][i]; });
    }
  }

  std::vector<VanishingFit> fits;
  for (const auto& colm : columns) {
    VanishingFit fit;
    fit.column = colm.name;
    fit.target = colm.target;
    double max_abs = 0.0;
    for (double yv : colm.y) max_abs = std::max(max_abs, std::abs(yv));
    if (max_abs <= 1e-13) {
      fit.exact_zero = true;
      fits.push_back(fit);
      continue;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double yv = std::abs(colm.y[k]);
      if (yv <= 0.0) continue;
      const double x = std::log(table.t[rows[k]] - 1.0);
      const double ly = std::log(yv);
      sx += x;
      sy += ly;
      sxx += x * x;
      sxy += x * ly;
      ++count;
    }
    if (count < rows.size() / 2) {
      fit.exact_zero = true;
      fits.push_back(fit);
      continue;
    }
    const double denom = count * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0))
      throw NumericalError("vanishing-order fit is degenerate");
    fit.exponent = (count * sxy - sx * sy) / denom;
    fit.prefactor = std::exp((sy - fit.exponent * sx) / count);
    fits.push_back(fit);
  }
  return fits;
}

}  // namespace rarefaction
