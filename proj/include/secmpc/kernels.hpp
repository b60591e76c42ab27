#pragma once

#include <optional>
#include <string>

#include "secmpc/nonlinear.hpp"

namespace secmpc {

enum class ErfBackend { Poly7, Fourier7 };
enum class ThresholdMode { OnErfArgument, VerbatimAlg1 };
enum class VarianceMode { Mean, PaperSum };

struct KernelConfig {
    ErfBackend erf_backend = ErfBackend::Poly7;
    ThresholdMode threshold_mode = ThresholdMode::OnErfArgument;
    VarianceMode variance_mode = VarianceMode::Mean;
    double eta_layernorm = 2000.0;
    double eta_softmax = 5000.0;
    unsigned t_rsqrt = 11;
    unsigned t_div = 13;
    double softmax_c = 5.0;
    double epsilon = 1e-5;
    unsigned guard_bits = 4;

    void validate() const {
        if (eta_layernorm <= 0 || eta_softmax <= 0) throw NumericError("eta constants must be positive");
        if (t_rsqrt < 1 || t_div < 1) throw NumericError("iteration counts must be >= 1");
    }
};

// Segmented erf coefficients shared by the protocol and plaintext references.
namespace erf_coeffs {
inline constexpr double kThreshold = 1.7;
inline constexpr double kPoly7[4] = {-0.0031673043, 0.0493278356, -0.297453931, 1.09952043}; // x^7,x^5,x^3,x
inline constexpr double kFourier7[7] = {1.25772,   -0.0299154, 0.382155, -0.0519123,
                                        0.196033,  -0.0624557, 0.118029};
} // namespace erf_coeffs

// Segmented erf: two batched comparisons pick the segment, the middle segment
// evaluates the configured backend. cmp carries the values the thresholds
// apply to (xhat or x depending on threshold_mode).
ArithShareTensor serf(Session& s, const ArithShareTensor& xhat, const ArithShareTensor& cmp,
                      const KernelConfig& cfg);

// GeLU(x) = x/2 * (1 + erf(x / sqrt 2)).
ArithShareTensor sgelu(Session& s, const ArithShareTensor& x, const KernelConfig& cfg);

// LayerNorm over a vector with public affine parameters. gamma/beta may be
// scalars (broadcast) or one value per element.
ArithShareTensor slayernorm(Session& s, const ArithShareTensor& x, const std::vector<double>& gamma,
                            const std::vector<double>& beta, const KernelConfig& cfg);
// Shared-parameter path (one extra multiply round).
ArithShareTensor slayernorm_shared(Session& s, const ArithShareTensor& x,
                                   const ArithShareTensor& gamma, const ArithShareTensor& beta,
                                   const KernelConfig& cfg);

// 2Quad softmax: (x_i + c)^2 / sum_h (x_h + c)^2 via Goldschmidt division.
ArithShareTensor ssoftmax_2quad(Session& s, const ArithShareTensor& x, const KernelConfig& cfg);

// Row-wise variants batching every row of a matrix into the same rounds.
ArithShareTensor ssoftmax_2quad_rows(Session& s, const ArithShareTensor& x, const KernelConfig& cfg);
ArithShareTensor slayernorm_rows(Session& s, const ArithShareTensor& x,
                                 const std::vector<double>& gamma, const std::vector<double>& beta,
                                 const KernelConfig& cfg);

// Exact-softmax baseline: max-shift, repeated-squaring exponential, Newton
// reciprocal of the sum.
ArithShareTensor ssoftmax_exact(Session& s, const ArithShareTensor& x, const KernelConfig& cfg);

std::string to_string(ErfBackend b);
std::string to_string(ThresholdMode m);
std::string to_string(VarianceMode m);

} // namespace secmpc
