#pragma once

#include "secmpc/linear.hpp"

namespace secmpc {

// Elementwise sum of all entries -> scalar share (zero communication).
ArithShareTensor sum_elems(const ArithShareTensor& a);
// Value division by 2^k at unchanged scale (share-local rounding shift).
ArithShareTensor div_pow2(const ArithShareTensor& a, unsigned k);

// Strict less-than: arithmetic shares (scale 0) of 1{x < y}, elementwise.
// Arithmetic-to-boolean conversion through a fused Kogge-Stone adder
// (log2(l) AND rounds), sign-bit extraction, then a daBit bit-to-arithmetic
// conversion: log2(l) + 1 rounds total.
ArithShareTensor slt(Session& s, const ArithShareTensor& x, const ArithShareTensor& y);
ArithShareTensor slt_const(Session& s, const ArithShareTensor& x, double c);

// Full bit decomposition of an arithmetic share (same adder, all sum bits).
BoolShareTensor a2b(Session& s, const ArithShareTensor& x);

// Vector maximum by tree reduction: ceil(log2 n) comparison layers, selections
// via one raw multiply per pair; exact in the ring.
ArithShareTensor smax(Session& s, const ArithShareTensor& x);

// Repeated squaring: (1 + x/2^8)^(2^8) via 8 sequential squarings.
ArithShareTensor sexp(Session& s, const ArithShareTensor& x, unsigned guard_bits = 8);

// sin(pi*x/10) from one sine triple; opens (theta - t) mod 2^21 after a local
// rescale of the argument into a power-of-two period domain.
ArithShareTensor ssin_period20(Session& s, const ArithShareTensor& x);

// Newton baselines with CrypTen-style initial values.
ArithShareTensor srecip_newton(Session& s, const ArithShareTensor& x, unsigned iters = 10,
                               unsigned guard_bits = 2);
ArithShareTensor srsqrt_newton(Session& s, const ArithShareTensor& x, unsigned iters = 3,
                               unsigned guard_bits = 2);
ArithShareTensor ssqrt_newton(Session& s, const ArithShareTensor& x, unsigned iters = 3,
                              unsigned guard_bits = 2);

struct GoldschmidtParams {
    unsigned t = 13;           // iteration count
    double eta = 1.0;          // public deflation constant
    double lo = 0.001, hi = 1.999; // interval the deflated input must land in
    unsigned guard_bits = 4;   // internal extra fractional bits
};

inline GoldschmidtParams div_params(double eta = 1.0, unsigned t = 13) {
    return GoldschmidtParams{t, eta, 0.001, 1.999, 4};
}
inline GoldschmidtParams rsqrt_params(double eta = 1.0, unsigned t = 11) {
    return GoldschmidtParams{t, eta, 0.001, 2.99, 5};
}

// Goldschmidt division p/q. q may be scalar (broadcast against p) or have p's
// shape (elementwise). Both sides are deflated by the same quantized 1/eta so
// the ratio is preserved. t rounds, (per p-element + per q-element) * 4l bits
// per iteration; the two multiplies of an iteration share one round.
ArithShareTensor gs_div(Session& s, const ArithShareTensor& p, const ArithShareTensor& q,
                        const GoldschmidtParams& params = div_params());

// Goldschmidt inverse square root of deflated q: per iteration one squaring
// then two multiplies merged into one round (2 rounds, 10l bits per element).
ArithShareTensor gs_rsqrt(Session& s, const ArithShareTensor& q,
                          const GoldschmidtParams& params = rsqrt_params());

// Plaintext oracles for the same iteration counts (used by tests and reports).
double gs_div_ref(double p, double q, unsigned t = 13);
double gs_rsqrt_ref(double q, unsigned t = 11);
double sexp_ref(double x);
double srecip_ref(double x, unsigned iters = 10);
double srsqrt_ref(double x, unsigned iters = 3);

} // namespace secmpc
