#include "lbt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace lbt::quad {

namespace {

// Kronrod abscissae (descending) and weights of the 21-point rule; the odd
// entries are the 10-point Gauss abscissae with weights kGaussW.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208005627880, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussW = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMinPanels = 16;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int segment;
  bool splittable;
};

// A segment is a finite parameter interval with the variable change that maps
// it onto part of the real line; `jacobian` folds dx/dt into the integrand.
struct Segment {
  double t0;
  double t1;
  std::function<double(double)> g;
};

Panel gauss_kronrod(const std::function<double(double)>& g, double a, double b, int segment, int& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double resk = kWgk[10] * fc;
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kGaussW[j / 2] * sum;
  }
  evaluations += 21;
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double error = std::abs((resk - resg) * half);
  if (resasc != 0.0 && error != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) error = std::max(50.0 * kEps * resabs, error);

  if (!std::isfinite(value) || !std::isfinite(error)) {
    std::ostringstream msg;
    msg << "integrand is not finite on panel [" << a << ", " << b << "]";
    throw std::domain_error(msg.str());
  }
  const bool splittable = std::abs(b - a) > 64.0 * kEps * std::max({std::abs(a), std::abs(b), 1e-300});
  return {a, b, value, error, segment, splittable};
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

Estimate adaptive(const std::vector<Segment>& segments, const QuadratureSpec& spec) {
  require(validate(spec));
  std::vector<std::pair<double, double>> seeds;
  std::vector<int> seed_segment;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].t1 > segments[s].t0) {
      seeds.emplace_back(segments[s].t0, segments[s].t1);
      seed_segment.push_back(static_cast<int>(s));
    }
  }
  // Uniformly refine the seeds so narrow structure is unlikely to fall
  // between the nodes of a single coarse panel.
  const int pieces = std::max(1, static_cast<int>(std::ceil(kMinPanels / std::max<std::size_t>(seeds.size(), 1))));

  Estimate est;
  std::vector<Panel> panels;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto [t0, t1] = seeds[k];
    const auto& g = segments[seed_segment[k]].g;
    for (int p = 0; p < pieces; ++p) {
      const double a = t0 + (t1 - t0) * p / pieces;
      const double b = (p + 1 == pieces) ? t1 : t0 + (t1 - t0) * (p + 1) / pieces;
      panels.push_back(gauss_kronrod(g, a, b, seed_segment[k], est.evaluations));
    }
  }

  auto totals = [&panels]() {
    double v = 0.0;
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  int subdivisions = static_cast<int>(panels.size());
  bool converged = error <= tolerance(spec, value);
  while (!converged && subdivisions < spec.max_subdivisions) {
    auto worst = panels.end();
    for (auto it = panels.begin(); it != panels.end(); ++it) {
      if (it->splittable && (worst == panels.end() || it->error > worst->error)) worst = it;
    }
    if (worst == panels.end()) break;
    const Panel parent = *worst;
    const auto& g = segments[parent.segment].g;
    const double mid = 0.5 * (parent.a + parent.b);
    *worst = gauss_kronrod(g, parent.a, mid, parent.segment, est.evaluations);
    panels.push_back(gauss_kronrod(g, mid, parent.b, parent.segment, est.evaluations));
    ++subdivisions;
    std::tie(value, error) = totals();
    converged = error <= tolerance(spec, value);
  }

  // Fixed summation order, independent of the refinement history.
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) {
    return x.segment != y.segment ? x.segment < y.segment : x.a < y.a;
  });
  std::tie(value, error) = totals();
  est.value = value;
  est.error = error;
  est.intervals = static_cast<int>(panels.size());
  if (!converged) throw NonConvergence(est);
  return est;
}

std::vector<double> sorted_points(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> pts{a};
  for (double x : breakpoints) {
    if (std::isfinite(x) && x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void add_finite(std::vector<Segment>& segments, const Integrand& f, double a, double b,
                std::span<const double> breakpoints) {
  const auto pts = sorted_points(a, b, breakpoints);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) segments.push_back({pts[k], pts[k + 1], f});
}

void add_tails(std::vector<Segment>& segments, const Integrand& f, double a, double b) {
  const double scale = std::max(1.0, 0.5 * (b - a));
  // [b, inf): x = b + s (1 - t)/t, dx = s dt / t^2 ; (-inf, a] mirrored.
  segments.push_back({0.0, 1.0, [f, b, scale](double t) { return scale * f(b + scale * (1.0 - t) / t) / (t * t); }});
  segments.push_back({0.0, 1.0, [f, a, scale](double t) { return scale * f(a - scale * (1.0 - t) / t) / (t * t); }});
}

}  // namespace

NonConvergence::NonConvergence(const Estimate& best)
    : std::runtime_error("quadrature did not converge within the subdivision budget (estimate " +
                         std::to_string(best.value) + ", error " + std::to_string(best.error) + ")"),
      best_(best) {}

Estimate integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                          std::span<const double> breakpoints) {
  if (a == b) return {};
  if (a > b) {
    Estimate e = integrate_finite(f, b, a, spec, breakpoints);
    e.value = -e.value;
    return e;
  }
  std::vector<Segment> segments;
  add_finite(segments, f, a, b, breakpoints);
  return adaptive(segments, spec);
}

Estimate integrate_unbounded(const Integrand& f, const QuadratureSpec& spec, std::span<const double> breakpoints) {
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (double x : breakpoints) {
    if (!std::isfinite(x)) continue;
    lo = any ? std::min(lo, x) : x;
    hi = any ? std::max(hi, x) : x;
    any = true;
  }
  std::vector<Segment> segments;
  if (hi > lo) add_finite(segments, f, lo, hi, breakpoints);
  add_tails(segments, f, lo, hi);
  return adaptive(segments, spec);
}

Estimate integrate(const Integrand& f, const IntegrandProfile& profile) {
  const auto& spec = profile.spec;
  if (spec.window) return integrate_finite(f, spec.window->first, spec.window->second, spec, profile.breakpoints);

  struct Dispatch {
    const Integrand& f;
    const IntegrandProfile& profile;

    Estimate operator()(const Band& band) const {
      if (!(band.half_width >= 0) || !(band.broadening >= 0)) {
        throw std::invalid_argument("band profile needs non-negative half width and broadening");
      }
      const double edge = band.half_width + 10.0 * band.broadening;
      std::vector<double> pts(profile.breakpoints);
      pts.push_back(-edge);
      pts.push_back(edge);
      return integrate_unbounded(f, profile.spec, pts);
    }

    Estimate operator()(const FermiWindow& w) const {
      if (!(w.temperature >= 0)) throw std::invalid_argument("Fermi window needs temperature >= 0");
      const double lo = std::min(w.mu_left, w.mu_right) - 40.0 * w.temperature - w.half_width;
      const double hi = std::max(w.mu_left, w.mu_right) + 40.0 * w.temperature + w.half_width;
      std::vector<double> pts(profile.breakpoints);
      pts.push_back(w.mu_left);
      pts.push_back(w.mu_right);
      return integrate_finite(f, lo, hi, profile.spec, pts);
    }

    Estimate operator()(const Unbounded&) const { return integrate_unbounded(f, profile.spec, profile.breakpoints); }
  };
  return std::visit(Dispatch{f, profile}, profile.support);
}

}  // namespace lbt::quad
