#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "secmpc/errors.hpp"
#include "secmpc/prf.hpp"

namespace secmpc {

struct Shape {
    std::vector<std::size_t> dims;

    Shape() = default;
    Shape(std::initializer_list<std::size_t> d) : dims(d) {}
    explicit Shape(std::vector<std::size_t> d) : dims(std::move(d)) {}

    std::size_t numel() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
    std::size_t rank() const { return dims.size(); }
    bool operator==(const Shape&) const = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (i) s += "x";
            s += std::to_string(dims[i]);
        }
        return s + ")";
    }
};

inline Shape vec_shape(std::size_t n) { return Shape{std::vector<std::size_t>{n}}; }
inline Shape mat_shape(std::size_t r, std::size_t c) { return Shape{std::vector<std::size_t>{r, c}}; }

// Flat row-major tensor of ring elements.
struct RingTensor {
    Shape shape;
    std::vector<u64> data;

    RingTensor() = default;
    RingTensor(Shape s, u64 fill = 0) : shape(std::move(s)), data(shape.numel(), fill) {}
    RingTensor(Shape s, std::vector<u64> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != shape.numel()) throw FormatError("ring tensor data/shape mismatch");
    }
    std::size_t numel() const { return data.size(); }
};

// Double-precision tensor used by plaintext references and I/O.
struct DoubleTensor {
    Shape shape;
    std::vector<double> data;

    DoubleTensor() = default;
    DoubleTensor(Shape s, double fill = 0.0) : shape(std::move(s)), data(shape.numel(), fill) {}
    DoubleTensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != shape.numel()) throw FormatError("tensor data/shape mismatch");
    }
    std::size_t numel() const { return data.size(); }
    double& at(std::size_t r, std::size_t c) { return data[r * shape.dims[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * shape.dims[1] + c]; }
};

inline DoubleTensor random_tensor(Shape s, PrfStream& rng, double lo = -1.0, double hi = 1.0) {
    DoubleTensor t(std::move(s));
    for (auto& v : t.data) v = rng.next_range(lo, hi);
    return t;
}

} // namespace secmpc
