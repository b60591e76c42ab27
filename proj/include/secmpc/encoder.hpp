#pragma once

#include <map>

#include "secmpc/kernels.hpp"
#include "secmpc/tensor_io.hpp"

namespace secmpc {

// Toy transformer encoder layer: multi-head attention with 2Quad scores,
// GeLU FFN, post-norm residual blocks.
struct EncoderWeights {
    std::size_t d = 16, h = 4, s = 8, ffn = 64;
    std::vector<DoubleTensor> wq, wk, wv; // per head, (d x d/h)
    DoubleTensor wo;                      // (d x d)
    DoubleTensor w1, w2;                  // (d x ffn), (ffn x d)
    std::vector<double> b1, b2;
    std::vector<double> gamma1, beta1, gamma2, beta2; // public in the demo

    std::size_t head_dim() const { return d / h; }

    static EncoderWeights random(std::size_t d, std::size_t h, std::size_t s, std::size_t ffn,
                                 u64 seed);
    std::map<std::string, DoubleTensor> to_tensors() const;
    static EncoderWeights from_tensors(const std::map<std::string, DoubleTensor>& t);
};

DoubleTensor encoder_layer_plain(const DoubleTensor& x, const EncoderWeights& w,
                                 const KernelConfig& cfg);

// One party's shares of the encoder inputs.
struct EncoderShares {
    ArithShareTensor x;
    std::vector<ArithShareTensor> wq, wk, wv;
    ArithShareTensor wo, w1, w2, b1, b2;
};

std::pair<EncoderShares, EncoderShares> share_encoder_inputs(const DoubleTensor& x,
                                                             const EncoderWeights& w,
                                                             const FixedCfg& cfg, PrfStream& rng);

// The party program: same computation under MPC, with per-kernel meter tags
// {matmul, softmax_2quad, gelu, layernorm}.
ArithShareTensor encoder_layer_mpc(Session& s, const EncoderShares& sh, const EncoderWeights& w,
                                   const KernelConfig& cfg);

// Kernel configuration the toy demo runs with (deflation constants sized for
// toy-scale activations).
KernelConfig demo_kernel_config();

} // namespace secmpc
