#include <cmath>
#include <limits>
#include <numbers>

#include "covert/covert_rate.hpp"
#include "covert/errors.hpp"

namespace covert {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 1000;

// E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!), fine for 0 < z <= 1.
double e1_series(double z) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -z / k;
    const double contribution = term / k;
    sum += contribution;
    if (std::abs(contribution) < kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(z) - sum;
}

// e^z E1(z) by the modified Lentz continued fraction, for z > 1.
double scaled_e1_fraction(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw ConvergenceFailure("exponential integral continued fraction did not converge");
}

}  // namespace

double scaled_exp_integral_e1(double z) {
  if (!(z > 0.0)) throw DomainError("scaled E1 needs a positive argument");
  if (std::isinf(z)) return 0.0;
  if (z <= 1.0) return std::exp(z) * e1_series(z);
  return scaled_e1_fraction(z);
}

double exp_integral(double x) {
  if (!(x < 0.0)) throw DomainError("Ei is only provided for negative arguments");
  const double z = -x;
  if (z <= 1.0) return -e1_series(z);
  return -scaled_e1_fraction(z) * std::exp(-z);
}

}  // namespace covert
