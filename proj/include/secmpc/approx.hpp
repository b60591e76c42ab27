#pragma once

#include <functional>
#include <string>
#include <vector>

#include "secmpc/kernels.hpp"

namespace secmpc {
namespace approx {

// erf to ~1e-14 via Taylor series (small |x|) and a continued fraction for
// erfc (large |x|); independent of std::erf, which tests use as a cross-check.
double erf_ref(double x);

double gelu_ref(double x);
std::vector<double> softmax_ref(const std::vector<double>& x);
std::vector<double> layernorm_ref(const std::vector<double>& x, const std::vector<double>& gamma,
                                  const std::vector<double>& beta, VarianceMode mode,
                                  double epsilon = 1e-5);
double quad_ref(double x); // 0.125 x^2 + 0.25 x + 0.5
std::vector<double> two_quad_ref(const std::vector<double>& x, double c);

// Adaptive Simpson quadrature, absolute tolerance per panel.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

// Sine-series amplitudes of erf for the given period:
// beta_k = (2/P) * integral_{-P/2}^{P/2} erf(x) sin(2 pi k x / P) dx.
std::vector<double> fourier_coeffs(double period, unsigned n_terms);
// Companion cosine amplitudes (vanish for the odd integrand).
std::vector<double> fourier_cosine_coeffs(double period, unsigned n_terms);

// Plaintext segmented backends (double precision, published coefficients).
double erf_poly7(double xhat);
double erf_fourier7(double xhat);
double erf_segmented(ErfBackend backend, double xhat);
// GeLU through the segmented erf; threshold_mode picks which value the
// +-1.7 thresholds apply to.
double gelu_segmented(ErfBackend backend, ThresholdMode mode, double x);

struct ErrorStats {
    double mean_abs_err = 0;
    double err_var = 0;
    double max_abs_err = 0;
};

// Uniform sampling of |approx - gelu_ref| over [lo, hi].
ErrorStats error_report(ErfBackend backend, ThresholdMode mode, double lo, double hi,
                        std::size_t samples, u64 seed);

struct PeriodFit {
    double period = 0;
    double max_err = 0;  // max |fit - erf| on [-1.7, 1.7]
    double mean_err = 0;
    std::vector<double> coeffs;
};

std::vector<PeriodFit> period_study(const std::vector<double>& periods, unsigned n_terms);

std::string error_report_csv(const std::vector<std::tuple<std::string, double, double, ErrorStats>>& rows);
std::string period_study_csv(const std::vector<PeriodFit>& rows);

} // namespace approx
} // namespace secmpc
