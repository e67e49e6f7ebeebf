#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) integration. Tails of
// unbounded domains are compactified with x = a + (1 - t)/t before the same
// adaptive rule is applied, so every node is interior to its panel.

#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lbt/model.hpp"

namespace lbt::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Thrown when the subdivision budget runs out; carries the best estimate.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const Estimate& best);
  const Estimate& best() const { return best_; }

 private:
  Estimate best_;
};

/// Band of half-width `half_width` (2|J|) broadened by `broadening` (Delta + nu).
/// The core panel is [-hw - 10 b, hw + 10 b]; the Lorentzian tails beyond it
/// are integrated on the compactified variable.
struct Band {
  double half_width = 2.0;
  double broadening = 0.0;
};

/// Window where f_L - f_R (or -df/de) is non-negligible:
/// [min(mu) - 40 T - hw, max(mu) + 40 T + hw]. Finite domain, no tails.
struct FermiWindow {
  double mu_left = 0.0;
  double mu_right = 0.0;
  double temperature = 0.0;
  double half_width = 2.0;
};

struct Unbounded {};

using SupportHint = std::variant<Band, FermiWindow, Unbounded>;

struct IntegrandProfile {
  SupportHint support = Unbounded{};
  QuadratureSpec spec{};
  /// Points where the integrand has structure (peaks, kinks, steps).
  std::vector<double> breakpoints{};
};

/// Adaptive integral over [a, b] with optional interior breakpoints.
Estimate integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                          std::span<const double> breakpoints = {});

/// Integral over the real line. Breakpoints (if any) bound the finite core;
/// the two tails are compactified. `f` must decay at least like 1/x^2.
Estimate integrate_unbounded(const Integrand& f, const QuadratureSpec& spec,
                             std::span<const double> breakpoints = {});

/// Dispatches on the support hint; `spec.window`, when set, wins.
Estimate integrate(const Integrand& f, const IntegrandProfile& profile);

}  // namespace lbt::quad
