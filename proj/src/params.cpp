#include "fraclane/params.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclane/errors.hpp"

namespace fraclane {

CoercivityError::CoercivityError(double lam, double lam1)
    : Error([&] {
        std::ostringstream os;
        os << "energy is not coercive: lambda = " << lam << " >= lambda_1 = " << lam1;
        return os.str();
      }()),
      lambda(lam),
      lambda1(lam1) {}

ConvergenceError::ConvergenceError(const std::string& what, int iters, double res)
    : Error([&] {
        std::ostringstream os;
        os << what << " (iterations = " << iters << ", residual = " << res << ")";
        return os.str();
      }()),
      iterations(iters),
      residual(res) {}

namespace {

void check_dimension_and_order(int N, double s) {
  if (N < 1) throw InvalidArgument("dimension N must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("order s must lie strictly inside (0, 1)");
}

double critical(int N, double s) {
  const double n = N;
  if (n <= 2.0 * s) return std::numeric_limits<double>::infinity();
  return (n + 2.0 * s) / (n - 2.0 * s);
}

}  // namespace

double FracParams::critical_exponent() const { return critical(n_, s_); }

FracParams FracParams::with_lambda(double lambda) const {
  return make_params(n_, s_, p_, lambda, r_);
}

FracParams FracParams::with_p(double p) const { return make_params(n_, s_, p, lambda_, r_); }

FracParams make_params(int N, double s, double p, double lambda, double R) {
  check_dimension_and_order(N, s);
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("radius R must be positive");
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  const double pc = critical(N, s);
  if (!(p > 1.0) || !(p < pc)) {
    std::ostringstream os;
    os << "exponent p = " << p << " is outside the subcritical window (1, " << pc << ")";
    throw InvalidArgument(os.str());
  }
  return FracParams(N, s, p, lambda, R);
}

double cns_constant(int N, double s) {
  check_dimension_and_order(N, s);
  // Gamma(-s) < 0 on (0,1); -s Gamma(-s) = Gamma(1-s) gives the positive form.
  const double n = N;
  const double log_c = 2.0 * s * std::log(2.0) + std::log(s) + std::lgamma(0.5 * n + s) -
                       0.5 * n * std::log(std::numbers::pi) - std::lgamma(1.0 - s);
  return std::exp(log_c);
}

}  // namespace fraclane
