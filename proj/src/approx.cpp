#include "secmpc/approx.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace secmpc {
namespace approx {

namespace {
constexpr double kTwoOverSqrtPi = 1.1283791670955126;
}

double erf_ref(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-300) return x;
    if (ax > 6.5) return x > 0 ? 1.0 : -1.0;
    if (ax <= 3.2) {
        // Taylor series: erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
        double term = ax, sum = ax;
        double x2 = ax * ax;
        for (int n = 1; n < 200; ++n) {
            term *= -x2 / n;
            double add = term / (2 * n + 1);
            sum += add;
            if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
        }
        double v = kTwoOverSqrtPi * sum;
        return x > 0 ? v : -v;
    }
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
    // evaluated bottom-up with a deep fixed tail.
    double cf = 0.0;
    for (int k = 60; k >= 1; --k) cf = (k / 2.0) / (ax + cf);
    double erfc = std::exp(-ax * ax) / (std::sqrt(std::numbers::pi) * (ax + cf));
    double v = 1.0 - erfc;
    return x > 0 ? v : -v;
}

double gelu_ref(double x) { return x / 2.0 * (1.0 + erf_ref(x / std::numbers::sqrt2)); }

std::vector<double> softmax_ref(const std::vector<double>& x) {
    double mx = x[0];
    for (double v : x) mx = std::max(mx, v);
    std::vector<double> e(x.size());
    double sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        e[i] = std::exp(x[i] - mx);
        sum += e[i];
    }
    for (auto& v : e) v /= sum;
    return e;
}

std::vector<double> layernorm_ref(const std::vector<double>& x, const std::vector<double>& gamma,
                                  const std::vector<double>& beta, VarianceMode mode, double epsilon) {
    std::size_t n = x.size();
    double mu = 0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(n);
    double var = 0;
    for (double v : x) var += (v - mu) * (v - mu);
    if (mode == VarianceMode::Mean) var /= static_cast<double>(n);
    double denom = std::sqrt(var + epsilon);
    std::vector<double> out(n);
    auto at = [&](const std::vector<double>& v, std::size_t i) {
        return v.size() == 1 ? v[0] : v.at(i);
    };
    for (std::size_t i = 0; i < n; ++i) out[i] = at(gamma, i) * (x[i] - mu) / denom + at(beta, i);
    return out;
}

double quad_ref(double x) { return 0.125 * x * x + 0.25 * x + 0.5; }

std::vector<double> two_quad_ref(const std::vector<double>& x, double c) {
    std::vector<double> out(x.size());
    double q = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = (x[i] + c) * (x[i] + c);
        q += out[i];
    }
    for (auto& v : out) v /= q;
    return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, m, fa, flm, fm);
    double right = simpson(f, m, b, fm, frm, fb);
    double err = left + right - whole;
    if (depth <= 0) throw NumericError("quadrature did not converge");
    if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double m = 0.5 * (lo + hi);
    double fa = f(lo), fm = f(m), fb = f(hi);
    return adaptive(f, lo, hi, fa, fm, fb, simpson(f, lo, hi, fa, fm, fb), tol, 60);
}

std::vector<double> fourier_coeffs(double period, unsigned n_terms) {
    if (period <= 0 || n_terms < 1) throw NumericError("fourier_coeffs needs period > 0, n_terms >= 1");
    std::vector<double> out(n_terms);
    double half = period / 2.0;
    for (unsigned k = 1; k <= n_terms; ++k) {
        auto f = [&, k](double x) { return erf_ref(x) * std::sin(2.0 * std::numbers::pi * k * x / period); };
        // Integrate per half-oscillation so the adaptive rule tracks the sign changes.
        double acc = 0;
        double step = half / k;
        for (unsigned j = 0; j < 2 * k; ++j) {
            double a = -half + j * step, b = -half + (j + 1) * step;
            acc += integrate(f, a, b, 1e-11);
        }
        out[k - 1] = 2.0 / period * acc;
    }
    return out;
}

std::vector<double> fourier_cosine_coeffs(double period, unsigned n_terms) {
    if (period <= 0 || n_terms < 1) throw NumericError("fourier_cosine_coeffs needs period > 0, n_terms >= 1");
    std::vector<double> out(n_terms);
    double half = period / 2.0;
    for (unsigned k = 1; k <= n_terms; ++k) {
        auto f = [&, k](double x) { return erf_ref(x) * std::cos(2.0 * std::numbers::pi * k * x / period); };
        double acc = 0;
        double step = half / k;
        for (unsigned j = 0; j < 2 * k; ++j) {
            double a = -half + j * step, b = -half + (j + 1) * step;
            acc += integrate(f, a, b, 1e-11);
        }
        out[k - 1] = 2.0 / period * acc;
    }
    return out;
}

double erf_poly7(double x) {
    const double* c = erf_coeffs::kPoly7;
    double x2 = x * x;
    return ((c[0] * x2 + c[1]) * x2 + c[2]) * x2 * x + c[3] * x;
}

double erf_fourier7(double x) {
    double f = 0;
    for (int k = 1; k <= 7; ++k)
        f += erf_coeffs::kFourier7[k - 1] * std::sin(k * std::numbers::pi * x / 10.0);
    return f;
}

double erf_segmented(ErfBackend backend, double xhat) {
    if (xhat < -erf_coeffs::kThreshold) return -1.0;
    if (xhat > erf_coeffs::kThreshold) return 1.0;
    return backend == ErfBackend::Poly7 ? erf_poly7(xhat) : erf_fourier7(xhat);
}

double gelu_segmented(ErfBackend backend, ThresholdMode mode, double x) {
    double xhat = x / std::numbers::sqrt2;
    double cmp = mode == ThresholdMode::OnErfArgument ? xhat : x;
    double e;
    if (cmp < -erf_coeffs::kThreshold)
        e = -1.0;
    else if (cmp > erf_coeffs::kThreshold)
        e = 1.0;
    else
        e = backend == ErfBackend::Poly7 ? erf_poly7(xhat) : erf_fourier7(xhat);
    return x / 2.0 * (1.0 + e);
}

ErrorStats error_report(ErfBackend backend, ThresholdMode mode, double lo, double hi,
                        std::size_t samples, u64 seed) {
    PrfStream rng(seed, "error_report");
    double sum = 0, sum2 = 0, mx = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        double x = rng.next_range(lo, hi);
        double e = std::fabs(gelu_segmented(backend, mode, x) - gelu_ref(x));
        sum += e;
        sum2 += e * e;
        mx = std::max(mx, e);
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    return ErrorStats{mean, sum2 / n - mean * mean, mx};
}

std::vector<PeriodFit> period_study(const std::vector<double>& periods, unsigned n_terms) {
    std::vector<PeriodFit> out;
    for (double P : periods) {
        PeriodFit fit;
        fit.period = P;
        fit.coeffs = fourier_coeffs(P, n_terms);
        const int grid = 20001;
        double sum = 0;
        for (int i = 0; i < grid; ++i) {
            double x = -1.7 + 3.4 * i / (grid - 1);
            double v = 0;
            for (unsigned k = 1; k <= n_terms; ++k)
                v += fit.coeffs[k - 1] * std::sin(2.0 * std::numbers::pi * k * x / P);
            double e = std::fabs(v - erf_ref(x));
            fit.max_err = std::max(fit.max_err, e);
            sum += e;
        }
        fit.mean_err = sum / grid;
        out.push_back(std::move(fit));
    }
    return out;
}

std::string error_report_csv(
    const std::vector<std::tuple<std::string, double, double, ErrorStats>>& rows) {
    std::ostringstream os;
    os << "backend,interval_lo,interval_hi,mean_abs_err,err_var\n";
    for (const auto& [name, lo, hi, st] : rows)
        os << name << "," << lo << "," << hi << "," << st.mean_abs_err << "," << st.err_var << "\n";
    return os.str();
}

std::string period_study_csv(const std::vector<PeriodFit>& rows) {
    std::ostringstream os;
    os << "period,max_err,mean_err\n";
    for (const auto& r : rows) os << r.period << "," << r.max_err << "," << r.mean_err << "\n";
    return os.str();
}

} // namespace approx
} // namespace secmpc
