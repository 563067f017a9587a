// Energy functionals, growth fits, convergence tables, and the manufactured
// balance identity.
#include "rarefaction/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rarefaction/errors.hpp"

namespace rarefaction {

namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

using Matrix = std::vector<std::vector<double>>;

// Centered second-order u-derivative of every row, one-sided at the edges.
Matrix d_du(const Matrix& f, double du) {
  Matrix out(f.size());
  const std::size_t nu = f[0].size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i].resize(nu);
    const std::vector<double>& row = f[i];
    out[i][0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * du);
    for (std::size_t j = 1; j + 1 < nu; ++j)
      out[i][j] = (row[j + 1] - row[j - 1]) / (2.0 * du);
    out[i][nu - 1] =
        (3.0 * row[nu - 1] - 4.0 * row[nu - 2] + row[nu - 3]) / (2.0 * du);
  }
  return out;
}

// Quadratic-stencil t-derivative down each u column over nonuniform rows;
// one-sided quadratics at the first and last row.
Matrix d_dt(const Matrix& f, const std::vector<double>& t) {
  const std::size_t nt = f.size(), nu = f[0].size();
  Matrix out(nt, std::vector<double>(nu));
  auto weights = [&](std::size_t i0, double at, double& w0, double& w1,
                     double& w2) {
    const double t0 = t[i0], t1 = t[i0 + 1], t2 = t[i0 + 2];
    w0 = (2.0 * at - t1 - t2) / ((t0 - t1) * (t0 - t2));
    w1 = (2.0 * at - t0 - t2) / ((t1 - t0) * (t1 - t2));
    w2 = (2.0 * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
  };
  for (std::size_t i = 0; i < nt; ++i) {
    const std::size_t i0 = (i == 0) ? 0 : (i == nt - 1 ? nt - 3 : i - 1);
    double w0, w1, w2;
    weights(i0, t[i], w0, w1, w2);
    for (std::size_t j = 0; j < nu; ++j)
      out[i][j] = w0 * f[i0][j] + w1 * f[i0 + 1][j] + w2 * f[i0 + 2][j];
  }
  return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return acc;
}

struct StencilPack {
  Matrix psi, Lpsi, Tpsi, kappa_geo;
};

StencilPack build_stencils(const AcousticalGrid& grid, PsiField field, int n) {
  if (n < 0 || n > 3)
    throw ConfigError("energy supports at most 3 T-applications");
  if (grid.t.size() < 3 || grid.u.size() < 5)
    throw ConfigError("grid too small for energy stencils");
  const double du = grid.u[1] - grid.u[0];
  StencilPack pack;
  pack.psi = (field == PsiField::w) ? grid.w : grid.wbar;
  for (int k = 0; k < n; ++k) pack.psi = d_du(pack.psi, du);
  pack.Lpsi = d_dt(pack.psi, grid.t);
  pack.Tpsi = d_du(pack.psi, du);
  pack.kappa_geo = d_du(grid.r, du);
  for (auto& row : pack.kappa_geo)
    for (double& x : row) x = -x;
  return pack;
}

struct WeightAB {
  double a = 0.0, b = 1.0;
};

WeightAB weight_at(MultiplierKind kind, double s, double t, double kappa,
                   double c) {
  if (!(kappa > 0.0))
    throw NumericalError("energy weights need positive kappa");
  WeightAB ab;
  switch (kind) {
    case MultiplierKind::local:
    case MultiplierKind::global_wbar:
      ab.a = kappa / c;
      break;
    case MultiplierKind::global_w:
      ab.a = std::pow(t, 1.0 + s) * c / kappa;
      break;
  }
  return ab;
}

}  // namespace

const char* to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::local:
      return "local";
    case MultiplierKind::global_w:
      return "global_w";
    case MultiplierKind::global_wbar:
      return "global_wbar";
  }
  return "unknown";
}

const char* to_string(PsiField field) {
  return field == PsiField::w ? "w" : "wbar";
}

EnergyReport energy(const AcousticalGrid& grid, PsiField field, int n,
                    MultiplierKind kind, double s) {
  if (!(s > 0.0) || !(s < 1.0))
    throw ConfigError("multiplier weight exponent must lie in (0, 1)");
  const StencilPack pack = build_stencils(grid, field, n);
  const std::size_t nt = grid.t.size(), nu = grid.u.size();

  EnergyReport rep;
  rep.kind = kind;
  rep.field = field;
  rep.n = n;
  rep.s = s;
  rep.t = grid.t;
  rep.u = grid.u;
  rep.E.resize(nt);
  rep.F.assign(nu, 0.0);

  std::vector<double> e_row(nu), f_col(nt);
  Matrix fdens(nt, std::vector<double>(nu));
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nu; ++j) {
      const double c = grid.c_at(i, j);
      const double kappa = pack.kappa_geo[i][j];
      const WeightAB ab = weight_at(kind, s, grid.t[i], kappa, c);
      const double U = pack.Lpsi[i][j];
      const double W = 2.0 * pack.Tpsi[i][j] + kappa / c * U;
      const double area = kFourPi * grid.r[i][j] * grid.r[i][j];
      e_row[j] = 0.5 * (ab.b * W * W + ab.a * (kappa / c) * U * U) * area;
      fdens[i][j] = ab.a * U * U * area;
    }
    rep.E[i] = trapezoid(grid.u, e_row);
  }
  for (std::size_t j = 0; j < nu; ++j) {
    for (std::size_t i = 0; i < nt; ++i) f_col[i] = fdens[i][j];
    rep.F[j] = trapezoid(grid.t, f_col);
  }

  for (std::size_t i = 0; i < nt; ++i) {
    rep.sup_E = std::max(rep.sup_E, rep.E[i]);
    rep.sup_E_over_t2 =
        std::max(rep.sup_E_over_t2, rep.E[i] / (grid.t[i] * grid.t[i]));
  }
  for (double fv : rep.F) rep.sup_F = std::max(rep.sup_F, fv);

  // Growth fit over the last decade of rows with positive energy.
  const double t_lo = grid.t.back() / 10.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < nt; ++i) {
    if (grid.t[i] < t_lo || !(rep.E[i] > 0.0)) continue;
    const double x = std::log(grid.t[i]);
    const double y = std::log(rep.E[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 4) {
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) > 0.0) {
      rep.fit_valid = true;
      rep.fit_exponent = (count * sxy - sx * sy) / denom;
      rep.fit_constant = std::exp((sy - rep.fit_exponent * sx) / count);
    }
  }
  return rep;
}

double flux(const AcousticalGrid& grid, PsiField field, int n,
            MultiplierKind kind, double u_level, double s) {
  const EnergyReport rep = energy(grid, field, n, kind, s);
  if (u_level < grid.u.front() - 1e-12 || u_level > grid.u.back() + 1e-12)
    throw ConfigError("flux level outside the u grid");
  // Linear interpolation between the two nearest u nodes.
  auto it = std::upper_bound(grid.u.begin(), grid.u.end(), u_level);
  std::size_t j1 = static_cast<std::size_t>(it - grid.u.begin());
  if (j1 == 0) j1 = 1;
  if (j1 >= grid.u.size()) j1 = grid.u.size() - 1;
  const std::size_t j0 = j1 - 1;
  const double lam = (u_level - grid.u[j0]) / (grid.u[j1] - grid.u[j0]);
  return (1.0 - lam) * rep.F[j0] + lam * rep.F[j1];
}

KappaGrowthReport kappa_growth(const AcousticalGrid& grid) {
  if (grid.t.back() < 100.0)
    throw ConfigError("growth fit needs a run reaching t >= 100");
  KappaGrowthReport rep;
  rep.u = grid.u;
  rep.t_hi = grid.t.back();
  rep.t_lo = rep.t_hi / 10.0;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < grid.t.size(); ++i)
    if (grid.t[i] >= rep.t_lo) rows.push_back(i);
  if (rows.size() < 8) throw ConfigError("growth fit window has too few rows");

  rep.alpha.resize(grid.u.size());
  rep.beta.resize(grid.u.size());
  for (std::size_t j = 0; j < grid.u.size(); ++j) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i : rows) {
      const double x = std::log(grid.t[i]);
      const double y = grid.kappa[i][j];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double count = static_cast<double>(rows.size());
    const double denom = count * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0))
      throw NumericalError("growth fit is degenerate");
    rep.alpha[j] = (count * sxy - sx * sy) / denom;
    rep.beta[j] = (sy - rep.alpha[j] * sx) / count;
  }
  return rep;
}

namespace {

// Row-wise 4-point Lagrange interpolation of every field at time `at`; the
// cubic order keeps the interpolation error well below the start-offset
// differences being measured.
void interp_row(const AcousticalGrid& g, double at, std::vector<double>& w,
                std::vector<double>& wbar, std::vector<double>& r) {
  auto it = std::upper_bound(g.t.begin(), g.t.end(), at);
  std::size_t hi = static_cast<std::size_t>(it - g.t.begin());
  std::size_t i0 = hi >= 2 ? hi - 2 : 0;
  if (i0 + 4 > g.t.size()) i0 = g.t.size() - 4;
  double lag[4];
  for (int a = 0; a < 4; ++a) {
    double p = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) p *= (at - g.t[i0 + b]) / (g.t[i0 + a] - g.t[i0 + b]);
    lag[a] = p;
  }
  const std::size_t nu = g.u.size();
  w.assign(nu, 0.0);
  wbar.assign(nu, 0.0);
  r.assign(nu, 0.0);
  for (int a = 0; a < 4; ++a) {
    const std::vector<double>& gw = g.w[i0 + a];
    const std::vector<double>& gwb = g.wbar[i0 + a];
    const std::vector<double>& gr = g.r[i0 + a];
    for (std::size_t j = 0; j < nu; ++j) {
      w[j] += lag[a] * gw[j];
      wbar[j] += lag[a] * gwb[j];
      r[j] += lag[a] * gr[j];
    }
  }
}

}  // namespace

DeltaConvergence delta_convergence(const std::vector<AcousticalGrid>& runs,
                                   double t_hi, int nt_samples) {
  if (runs.size() < 3)
    throw ConfigError("convergence table needs at least 3 runs");
  if (nt_samples < 4) throw ConfigError("convergence table needs >= 4 samples");
  DeltaConvergence table;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    table.start_offset.push_back(runs[k].t.front() - 1.0);
    if (!(table.start_offset.back() > 0.0))
      throw ConfigError("runs must start after the singular time");
    if (k > 0) {
      const double q = table.start_offset[k - 1] / table.start_offset[k];
      if (std::abs(q - 2.0) > 1e-6)
        throw ConfigError("runs must halve the start offset");
      if (runs[k].u.size() != runs[0].u.size())
        throw ConfigError("runs do not share a u grid");
      for (std::size_t j = 0; j < runs[0].u.size(); ++j)
        if (std::abs(runs[k].u[j] - runs[0].u[j]) > 1e-12)
          throw ConfigError("runs do not share a u grid");
    }
    if (runs[k].t.back() < t_hi - 1e-12)
      throw ConfigError("run does not cover the comparison window");
    if (runs[k].t.size() < 4)
      throw ConfigError("runs need at least 4 stored rows");
  }
  if (!(t_hi > 1.0 + table.start_offset.front()))
    throw ConfigError("comparison window is empty");

  std::vector<double> wa, wba, ra, wb, wbb, rb;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const double t_lo = runs[k].t.front();
    double d = 0.0;
    for (int m = 0; m < nt_samples; ++m) {
      const double at = t_lo + (t_hi - t_lo) * m / (nt_samples - 1);
      interp_row(runs[k], at, wa, wba, ra);
      interp_row(runs[k + 1], at, wb, wbb, rb);
      for (std::size_t j = 0; j < wa.size(); ++j) {
        d = std::max(d, std::abs(wa[j] - wb[j]));
        d = std::max(d, std::abs(wba[j] - wbb[j]));
        d = std::max(d, std::abs(ra[j] - rb[j]));
      }
    }
    table.diff.push_back(d);
  }
  double order_acc = 0.0;
  std::size_t order_n = 0;
  for (std::size_t k = 0; k + 1 < table.diff.size(); ++k) {
    const double q = table.diff[k + 1] / table.diff[k];
    table.ratio.push_back(q);
    if (q > 0.0) {
      order_acc += -std::log2(q);
      ++order_n;
    }
  }
  if (order_n > 0) table.fitted_order = order_acc / order_n;
  return table;
}

AcousticalGrid decimate_rows(const AcousticalGrid& grid, int factor) {
  if (factor < 1) throw ConfigError("decimation factor must be >= 1");
  AcousticalGrid out;
  out.gamma = grid.gamma;
  out.u = grid.u;
  for (std::size_t i = 0; i < grid.t.size(); i += factor) {
    out.t.push_back(grid.t[i]);
    out.w.push_back(grid.w[i]);
    out.wbar.push_back(grid.wbar[i]);
    out.r.push_back(grid.r[i]);
    out.kappa.push_back(grid.kappa[i]);
  }
  if (out.t.back() != grid.t.back()) {
    out.t.push_back(grid.t.back());
    out.w.push_back(grid.w.back());
    out.wbar.push_back(grid.wbar.back());
    out.r.push_back(grid.r.back());
    out.kappa.push_back(grid.kappa.back());
  }
  return out;
}

ManufacturedField standard_manufactured_field() {
  return [](double t, double u) {
    ManufacturedPoint p;
    p.r = t - u + 0.1 * std::sin(t) * std::cos(u);
    p.r_t = 1.0 + 0.1 * std::cos(t) * std::cos(u);
    p.r_u = -1.0 - 0.1 * std::sin(t) * std::sin(u);
    p.r_tu = -0.1 * std::cos(t) * std::sin(u);
    p.r_uu = -0.1 * std::sin(t) * std::cos(u);
    p.c = 1.0 + 0.1 * std::cos(t + u);
    p.c_t = -0.1 * std::sin(t + u);
    p.c_u = -0.1 * std::sin(t + u);
    const double ph = 2.0 * t - 3.0 * u;
    p.psi = std::sin(ph);
    p.psi_t = 2.0 * std::cos(ph);
    p.psi_u = -3.0 * std::cos(ph);
    p.psi_tt = -4.0 * std::sin(ph);
    p.psi_tu = 6.0 * std::sin(ph);
    return p;
  };
}

namespace {

struct BalancePoint {
  double e = 0.0;     // energy density in u
  double f = 0.0;     // flux density in t
  double bulk = 0.0;  // bulk density
};

BalancePoint balance_point(const ManufacturedPoint& p, MultiplierKind kind,
                           double s, double t) {
  const double kappa = -p.r_u;
  const double kappa_t = -p.r_tu;
  const double kappa_u = -p.r_uu;
  if (!(kappa > 0.0) || !(p.c > 0.0) || !(p.r > 0.0))
    throw NumericalError("manufactured field leaves the admissible region");

  double a, a_L, a_T;
  const double b = 1.0, b_L = 0.0;
  if (kind == MultiplierKind::global_w) {
    const double ts = std::pow(t, 1.0 + s);
    a = ts * p.c / kappa;
    a_L = (1.0 + s) * std::pow(t, s) * p.c / kappa +
          ts * (p.c_t * kappa - p.c * kappa_t) / (kappa * kappa);
    a_T = ts * (p.c_u * kappa - p.c * kappa_u) / (kappa * kappa);
  } else {
    a = kappa / p.c;
    a_L = (kappa_t * p.c - kappa * p.c_t) / (p.c * p.c);
    a_T = (kappa_u * p.c - kappa * p.c_u) / (p.c * p.c);
  }

  const double m = kappa / p.c;
  const double m_L = (kappa_t * p.c - kappa * p.c_t) / (p.c * p.c);
  const double U = p.psi_t;
  const double W = 2.0 * p.psi_u + m * U;
  const double LW = 2.0 * p.psi_tu + m_L * p.psi_t + m * p.psi_tt;
  const double trchi = 2.0 * p.r_t / p.r;
  const double trchibar = 2.0 * (2.0 * p.r_u + m * p.r_t) / p.r;
  const double mu_box = -0.5 * trchibar * U - 0.5 * trchi * W - LW;
  const double area = kFourPi * p.r * p.r;

  BalancePoint out;
  out.e = 0.5 * (b * W * W + a * m * U * U) * area;
  out.f = a * U * U * area;
  out.bulk = (-(mu_box) * (a * U + b * W) + 0.5 * b_L * W * W +
              (a_T + 0.5 * (m * a_L - a * m_L)) * U * U -
              0.5 * (a * trchi + b * trchibar) * U * W) *
             area;
  return out;
}

}  // namespace

BalanceResult balance_defect(const ManufacturedField& field,
                             MultiplierKind kind, double s, double t1,
                             double t2, double u1, double u2, int nt, int nu) {
  if (!(t2 > t1) || !(u2 > u1)) throw ConfigError("balance region is empty");
  if (nt < 4 || nu < 4) throw ConfigError("balance needs at least 4x4 panels");

  std::vector<double> tg(nt + 1), ug(nu + 1);
  for (int i = 0; i <= nt; ++i) tg[i] = t1 + (t2 - t1) * i / nt;
  for (int j = 0; j <= nu; ++j) ug[j] = u1 + (u2 - u1) * j / nu;

  auto energy_line = [&](double at) {
    std::vector<double> vals(nu + 1);
    for (int j = 0; j <= nu; ++j)
      vals[j] = balance_point(field(at, ug[j]), kind, s, at).e;
    return trapezoid(ug, vals);
  };
  auto flux_line = [&](double au) {
    std::vector<double> vals(nt + 1);
    for (int i = 0; i <= nt; ++i)
      vals[i] = balance_point(field(tg[i], au), kind, s, tg[i]).f;
    return trapezoid(tg, vals);
  };

  BalanceResult res;
  res.boundary = energy_line(t2) - energy_line(t1) + flux_line(u2) - flux_line(u1);

  std::vector<double> row(nu + 1), col(nt + 1);
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j <= nu; ++j)
      row[j] = balance_point(field(tg[i], ug[j]), kind, s, tg[i]).bulk;
    col[i] = trapezoid(ug, row);
  }
  res.bulk = trapezoid(tg, col);
  res.defect = res.boundary - res.bulk;
  return res;
}

}  // namespace rarefaction
