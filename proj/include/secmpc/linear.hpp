#pragma once

#include "secmpc/session.hpp"

namespace secmpc {

// Interactive linear protocols. Elementwise variants batch the whole tensor's
// openings into one exchange; *_batch fuses independent invocations into the
// same round.

// Raw ring product (no rescale); result scale = x.frac + y.frac.
ArithShareTensor smul_raw(Session& s, const ArithShareTensor& x, const ArithShareTensor& y);

// Fixed-point product with one share-local truncation after the Beaver
// combination; operands must share a scale, which the result keeps.
// Cost: 1 round, 4l bits per element.
ArithShareTensor smul(Session& s, const ArithShareTensor& x, const ArithShareTensor& y);

// Independent elementwise products fused into one round.
std::vector<ArithShareTensor> smul_batch(Session& s,
                                         const std::vector<std::pair<const ArithShareTensor*,
                                                                     const ArithShareTensor*>>& args,
                                         bool rescale = true);

// Squaring from an (a, a^2) pair correlation; only d = x - a is opened.
// Cost: 1 round, 2l bits per element.
ArithShareTensor ssquare_raw(Session& s, const ArithShareTensor& x);
ArithShareTensor ssquare(Session& s, const ArithShareTensor& x);

// Matrix product (m x k) * (k x n) via a matrix Beaver triple.
// Cost: 1 round, 2l(mk + kn) bits.
ArithShareTensor smatmul(Session& s, const ArithShareTensor& x, const ArithShareTensor& y);

// Broadcast a scalar share to n elements (shape (n)).
ArithShareTensor broadcast(const ArithShareTensor& scalar, std::size_t n);

} // namespace secmpc
