#include "rarefaction/background.hpp"

#include <algorithm>
#include <cmath>

#include "rarefaction/rng.hpp"
#include "rarefaction/tjet.hpp"

namespace rarefaction {

namespace {

constexpr int kProviderJetOrder = 9;

class ConstantBackground final : public BackgroundProvider {
 public:
  explicit ConstantBackground(const GammaLaw& eos) : eos_(eos) {}

  FluidState state(double) const override { return {1.0, 0.0}; }
  double radius(double t) const override { return t; }

  void jets(double t, int order, std::vector<double>& c, std::vector<double>& v,
            std::vector<double>& r) const override {
    if (order < 0 || order > max_jet_order()) {
      throw NumericalError("ConstantBackground::jets: order out of range");
    }
    c.assign(order + 1, 0.0);
    v.assign(order + 1, 0.0);
    r.assign(order + 1, 0.0);
    c[0] = 1.0;
    r[0] = t;
    if (order >= 1) r[1] = 1.0;
  }

  int max_jet_order() const override { return kProviderJetOrder; }
  std::string kind() const override { return "constant"; }
  const GammaLaw& eos() const override { return eos_; }

 private:
  GammaLaw eos_;
};

TJet truncate(const TJet& f, int order) {
  TJet g(order);
  for (int k = 0; k <= order; ++k) g.coeff(k) = f.coeff(k);
  return g;
}

class PerturbedBackground final : public BackgroundProvider {
 public:
  PerturbedBackground(const PerturbationSpec& spec, std::uint64_t seed,
                      const GammaLaw& eos, double t_max)
      : spec_(spec), eos_(eos), t_max_(t_max) {
    spec_.validate();
    if (!(t_max_ > 1.0)) {
      throw ConfigError("perturbed_background: t_max must exceed 1");
    }
    Rng rng(seed);
    g1_ = rng.uniform(0.3, 1.0);
    g2_ = rng.uniform(0.3, 1.0);
    beta_ = rng.uniform(1.0, 3.0);
    theta_ = rng.uniform(0.0, 6.283185307179586);
    trivial_ = spec_.epsilon == 0.0;
    if (!trivial_) {
      calibrate();
    }
  }

  FluidState state(double t) const override {
    if (trivial_) return {1.0, 0.0};
    std::vector<double> c, v, r;
    jets(t, 0, c, v, r);
    return {c[0], v[0]};
  }

  double radius(double t) const override {
    if (trivial_) return t;
    check_range(t);
    // One RK4 substep from the nearest table node below t.
    const auto idx = static_cast<std::size_t>((t - 1.0) / table_h_);
    const std::size_t k = std::min(idx, table_.size() - 1);
    const double t0 = 1.0 + static_cast<double>(k) * table_h_;
    return rk4_radius_step(t0, table_[k], t - t0);
  }

  void jets(double t, int order, std::vector<double>& c, std::vector<double>& v,
            std::vector<double>& r) const override {
    if (order < 0 || order > max_jet_order()) {
      throw NumericalError("PerturbedBackground::jets: order out of range");
    }
    if (trivial_) {
      c.assign(order + 1, 0.0);
      v.assign(order + 1, 0.0);
      r.assign(order + 1, 0.0);
      c[0] = 1.0;
      r[0] = t;
      if (order >= 1) r[1] = 1.0;
      return;
    }
    check_range(t);
    TJet cj, vj, rj;
    build_jets(t, order, cj, vj, rj);
    c.resize(order + 1);
    v.resize(order + 1);
    r.resize(order + 1);
    for (int n = 0; n <= order; ++n) {
      c[n] = cj.raw_deriv(n);
      v[n] = vj.raw_deriv(n);
      r[n] = rj.raw_deriv(n);
    }
  }

  int max_jet_order() const override { return kProviderJetOrder; }
  std::string kind() const override { return "perturbed"; }
  const GammaLaw& eos() const override { return eos_; }

  const PerturbationSpec& spec() const { return spec_; }

 private:
  void check_range(double t) const {
    if (!(t >= 1.0) || !(t <= t_max_)) {
      throw NumericalError("PerturbedBackground: t outside supported range");
    }
  }

  // Prescribed ingoing invariant along the curve. The t^delta phase makes
  // each further L-derivative genuinely pick up a factor ~ t^{delta-1}.
  TJet wbar_jet(double t, int order) const {
    const TJet tt = TJet::variable(t, order);
    const double amp = spec_.epsilon;
    const TJet phase = beta_ * pow(tt, spec_.delta_exp) + theta_;
    const TJet osc = sincos(phase).first;
    return TJet::constant(1.0 / eos_.gm1(), order) +
           amp * (g1_ * (TJet::constant(1.0, order) / tt) +
                  g2_ * (osc / (tt * tt)));
  }

  // (c, v) from the prescribed invariant and its transport equation:
  //   c v = -r dwbar/dt  =>  w = sqrt(wbar^2 + 2 r wbar' / (gamma-1)).
  void derived_state(double t, double r, double& c, double& v) const {
    const TJet wbf = wbar_jet(t, 1);
    const double wb = wbf.value();
    const double wbp = wbf.raw_deriv(1);
    const double w2 = wb * wb + 2.0 * r * wbp / eos_.gm1();
    if (!(w2 > 0.0)) {
      throw NumericalError("PerturbedBackground: invariant family degenerate");
    }
    const double w = std::sqrt(w2);
    c = 0.5 * eos_.gm1() * (wb + w);
    v = wb - w;
  }

  double radius_rhs(double t, double r) const {
    double c, v;
    derived_state(t, r, c, v);
    return v + c;
  }

  double rk4_radius_step(double t, double r, double h) const {
    if (h == 0.0) return r;
    const double k1 = radius_rhs(t, r);
    const double k2 = radius_rhs(t + 0.5 * h, r + 0.5 * h * k1);
    const double k3 = radius_rhs(t + 0.5 * h, r + 0.5 * h * k2);
    const double k4 = radius_rhs(t + h, r + h * k3);
    return r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  void build_table() {
    const double span = t_max_ - 1.0;
    const auto steps = static_cast<std::size_t>(std::ceil(span / 4e-3));
    table_h_ = span / static_cast<double>(steps);
    table_.assign(steps + 1, 0.0);
    table_[0] = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = 1.0 + static_cast<double>(k) * table_h_;
      table_[k + 1] = rk4_radius_step(t, table_[k], table_h_);
    }
  }

  // Full jets of (c, v, r) at t. The radius series is grown one order at a
  // time from r' = v + c; the computed (v+c) coefficient m only involves
  // radius coefficients <= m, so the loop is consistent.
  void build_jets(double t, int order, TJet& cj, TJet& vj, TJet& rj) const {
    const TJet wbf = wbar_jet(t, order + 1);
    const TJet wb = truncate(wbf, order);
    const TJet wbp = truncate(wbf.deriv(), order);
    rj = TJet(order);
    rj.coeff(0) = radius(t);
    const auto eval_state = [&](const TJet& rr, TJet& cc, TJet& vv) {
      const TJet w = sqrt(wb * wb + (2.0 / eos_.gm1()) * (rr * wbp));
      cc = 0.5 * eos_.gm1() * (wb + w);
      vv = wb - w;
    };
    for (int m = 0; m < order; ++m) {
      eval_state(rj, cj, vj);
      rj.coeff(m + 1) = (vj + cj).coeff(m) / (m + 1);
    }
    eval_state(rj, cj, vj);
  }

  struct BoundSample {
    double eps_scaled = 0.0;  // worst ratio of the epsilon-capped bounds
    std::vector<double> high_order;  // max of t^{3-2delta}|L^n c|,|L^n v|, n>=2
  };

  BoundSample sample_bounds(int n_samples) const {
    BoundSample out;
    out.high_order.assign(5, 0.0);  // orders 2..6
    const double hi = std::min(t_max_, 1e3);
    const double de = spec_.delta_exp;
    std::vector<double> c, v, r;
    for (int i = 0; i < n_samples; ++i) {
      const double f = static_cast<double>(i) / (n_samples - 1);
      const double t = std::exp(std::log(hi) * f);
      jets(t, 6, c, v, r);
      const double e1 = std::max(std::abs(c[0] - 1.0), std::abs(v[0])) * t;
      const double e2 =
          std::max(std::abs(c[1]), std::abs(v[1])) * std::pow(t, 2.0 - de);
      out.eps_scaled = std::max({out.eps_scaled, e1, e2});
      const double wt = std::pow(t, 3.0 - 2.0 * de);
      for (int n = 2; n <= 6; ++n) {
        out.high_order[n - 2] = std::max(
            out.high_order[n - 2], wt * std::max(std::abs(c[n]), std::abs(v[n])));
      }
    }
    return out;
  }

  void calibrate() {
    for (int pass = 0; pass < 4; ++pass) {
      build_table();
      const BoundSample probe = sample_bounds(2000);
      if (probe.eps_scaled <= 0.93 * spec_.epsilon) break;
      const double rho = 0.93 * spec_.epsilon / probe.eps_scaled;
      g1_ *= rho;
      g2_ *= rho;
    }
    build_table();
    const BoundSample fin = sample_bounds(10000);
    if (fin.eps_scaled > spec_.epsilon) {
      throw NumericalError(
          "perturbed_background: calibrated family still violates bounds");
    }
    if (spec_.M.empty()) {
      spec_.M.resize(5);
      for (int n = 0; n < 5; ++n) spec_.M[n] = 1.5 * fin.high_order[n];
    } else {
      for (std::size_t n = 0; n < std::min<std::size_t>(5, spec_.M.size());
           ++n) {
        if (fin.high_order[n] > spec_.M[n]) {
          throw NumericalError(
              "perturbed_background: supplied M bound violated by the family");
        }
      }
    }
  }

  PerturbationSpec spec_;
  GammaLaw eos_;
  double t_max_;
  bool trivial_ = false;
  double g1_ = 0.0, g2_ = 0.0, beta_ = 0.0, theta_ = 0.0;
  double table_h_ = 0.0;
  std::vector<double> table_;
};

}  // namespace

double BackgroundProvider::Lderiv(Quantity q, int n, double t) const {
  std::vector<double> c, v, r;
  jets(t, n, c, v, r);
  return q == Quantity::c ? c[n] : v[n];
}

void PerturbationSpec::validate() const {
  if (!(epsilon >= 0.0)) {
    throw ConfigError("PerturbationSpec: epsilon must be >= 0");
  }
  if (!(delta_exp > 0.0) || !(delta_exp < 0.5)) {
    throw ConfigError("PerturbationSpec: delta_exp must lie in (0, 1/2)");
  }
}

std::shared_ptr<const BackgroundProvider> constant_background(const GammaLaw& eos) {
  return std::make_shared<ConstantBackground>(eos);
}

std::shared_ptr<const BackgroundProvider> perturbed_background(
    const PerturbationSpec& spec, std::uint64_t seed, const GammaLaw& eos,
    double t_max) {
  return std::make_shared<PerturbedBackground>(spec, seed, eos, t_max);
}

const PerturbationSpec& effective_spec(const BackgroundProvider& provider) {
  const auto* p = dynamic_cast<const PerturbedBackground*>(&provider);
  if (p == nullptr) {
    throw ConfigError("effective_spec: provider is not a perturbed background");
  }
  return p->spec();
}

SampledCurve integrate_C0(const BackgroundProvider& provider, double t0,
                          double t1, double step) {
  if (!(step > 0.0)) {
    throw ConfigError("integrate_C0: step must be positive");
  }
  if (!(t1 > t0)) {
    throw ConfigError("integrate_C0: empty time span");
  }
  // The provider supplies the trace along the curve, so the characteristic
  // speed is a function of t alone; classical RK4 is kept regardless.
  const auto rhs = [&](double t, double) {
    const FluidState s = provider.state(t);
    return s.v + s.c;
  };
  SampledCurve out;
  out.t.push_back(t0);
  out.r.push_back(provider.radius(t0));
  double t = t0;
  double r = out.r[0];
  while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
    const double h = std::min(step, t1 - t);
    const double k1 = rhs(t, r);
    const double k2 = rhs(t + 0.5 * h, r + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, r + 0.5 * h * k2);
    const double k4 = rhs(t + h, r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    out.t.push_back(t);
    out.r.push_back(r);
  }
  return out;
}

}  // namespace rarefaction
