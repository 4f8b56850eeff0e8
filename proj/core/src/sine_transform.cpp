// Fourier-sine integrals via QUADPACK's QAWO/QAWF as shipped in GSL. The first and last
// half-period next to a finite end go through the local Gauss-Kronrod engine, which never
// evaluates at the endpoint and grades toward endpoint singularities.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "haus/error.hpp"
#include "haus/quad.hpp"

namespace haus::quad {

namespace {

constexpr std::size_t kLimit = 2000;
constexpr std::size_t kLevels = 30;

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
struct TableDeleter {
  void operator()(gsl_integration_qawo_table* t) const { gsl_integration_qawo_table_free(t); }
};

struct Thunk {
  const std::function<double(double)>* fn;
  std::size_t evaluations = 0;
};

double call(double x, void* params) {
  auto* thunk = static_cast<Thunk*>(params);
  ++thunk->evaluations;
  return (*thunk->fn)(x);
}

bool acceptable(int status, double abserr, double tol) {
  if (status == GSL_SUCCESS) return true;
  // Roundoff-limited termination is fine when the reported error still meets the target.
  return (status == GSL_EROUND || status == GSL_ESING || status == GSL_EMAXITER) && abserr <= 10.0 * tol;
}

}  // namespace

QuadResult integrate_sine(const std::function<double(double)>& amplitude, double omega, double lo, double hi,
                          double rel_tol, double abs_tol) {
  silence_gsl();
  if (!(hi > lo)) return {};
  if (omega == 0.0) return {};
  if (!std::isfinite(omega)) throw DomainError("sine frequency must be finite");
  const double sign = omega < 0.0 ? -1.0 : 1.0;
  const double w = std::abs(omega);
  const double half = std::numbers::pi / w;
  const double tol = std::max(abs_tol, 1e-300);

  auto local = [&](double a, double b) {
    return integrate(Integrand::on([&](double u) { return amplitude(u) * std::sin(w * u); }, a, b), rel_tol,
                     abs_tol > 0.0 ? abs_tol : 1e-300);
  };

  QuadResult total;
  auto accumulate = [&](const QuadResult& r) {
    total.value += r.value;
    total.abs_error_estimate += r.abs_error_estimate;
    total.panels_used += r.panels_used;
    total.evaluations += r.evaluations;
  };

  const bool bounded = std::isfinite(hi);
  if (bounded && hi - lo <= 4.0 * half) {
    accumulate(local(lo, hi));
    total.value *= sign;
    return total;
  }
  const double body_lo = lo + half;
  const double body_hi = bounded ? hi - half : hi;
  accumulate(local(lo, body_lo));
  if (bounded) accumulate(local(body_hi, hi));

  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> work(gsl_integration_workspace_alloc(kLimit));
  Thunk thunk{&amplitude};
  gsl_function f{&call, &thunk};
  double result = 0.0;
  double abserr = 0.0;
  int status = 0;
  if (bounded) {
    std::unique_ptr<gsl_integration_qawo_table, TableDeleter> table(
        gsl_integration_qawo_table_alloc(w, body_hi - body_lo, GSL_INTEG_SINE, kLevels));
    status = gsl_integration_qawo(&f, body_lo, tol, rel_tol, kLimit, work.get(), table.get(), &result, &abserr);
    if (!acceptable(status, abserr, std::max(tol, rel_tol * std::abs(result)))) {
      throw ConvergenceFailure(std::string("sine integral failed: ") + gsl_strerror(status), result, abserr);
    }
  } else {
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> cycles(gsl_integration_workspace_alloc(kLimit));
    std::unique_ptr<gsl_integration_qawo_table, TableDeleter> table(
        gsl_integration_qawo_table_alloc(w, 1.0, GSL_INTEG_SINE, kLevels));
    status = gsl_integration_qawf(&f, body_lo, tol, kLimit, work.get(), cycles.get(), table.get(), &result, &abserr);
    if (!acceptable(status, abserr, tol)) {
      throw ConvergenceFailure(std::string("sine integral failed: ") + gsl_strerror(status), result, abserr);
    }
  }
  accumulate({result, abserr, 1, thunk.evaluations});
  total.value *= sign;
  return total;
}

}  // namespace haus::quad
