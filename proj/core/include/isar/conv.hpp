#pragma once

#include "isar/tensor.hpp"

namespace isar {

enum class PadMode { reflect, zero };

/// 5x5 convolution layer (cross-correlation), padding width 2,
/// stride 1 or 2 (stride 2 halves spatial dims, ceil).
struct ConvLayer {
    static constexpr std::size_t kKernel = 5;
    static constexpr std::size_t kPad = 2;

    std::size_t in_ch = 0;
    std::size_t out_ch = 0;
    std::size_t stride = 1;
    PadMode pad = PadMode::reflect;
    std::vector<double> weights;  // out_ch * in_ch * 5 * 5
    std::vector<double> bias;     // out_ch

    ConvLayer() = default;
    ConvLayer(std::size_t in, std::size_t out, std::size_t s, PadMode p = PadMode::reflect);

    double& w(std::size_t oc, std::size_t ic, std::size_t ky, std::size_t kx) {
        return weights[((oc * in_ch + ic) * kKernel + ky) * kKernel + kx];
    }
    double w(std::size_t oc, std::size_t ic, std::size_t ky, std::size_t kx) const {
        return weights[((oc * in_ch + ic) * kKernel + ky) * kKernel + kx];
    }
};

struct ConvGrads {
    Tensor3 input;
    std::vector<double> weights;
    std::vector<double> bias;
};

Tensor3 conv2d_forward(const Tensor3& x, const ConvLayer& layer);
ConvGrads conv2d_backward(const Tensor3& x, const ConvLayer& layer, const Tensor3& grad_out);

/// Swish activation x * sigmoid(x), elementwise.
Tensor3 swish(const Tensor3& x);
/// d/dx swish at x, chained with grad_out.
Tensor3 swish_backward(const Tensor3& x, const Tensor3& grad_out);

double swish_scalar(double x);
double swish_grad_scalar(double x);

}  // namespace isar
