#include "isar/conv.hpp"

#include <algorithm>
#include <cmath>

namespace isar {

namespace {

// Symmetric reflection (edge repeated at the fold), clamped for tiny dims.
inline std::size_t mirror(long i, long n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
    return static_cast<std::size_t>(std::clamp(i, 0L, n - 1));
}

constexpr std::size_t K = ConvLayer::kKernel;
constexpr std::size_t P = ConvLayer::kPad;

Tensor3 pad_input(const Tensor3& x, PadMode mode) {
    Tensor3 out(x.channels, x.height + 2 * P, x.width + 2 * P);
    const long h = static_cast<long>(x.height);
    const long w = static_cast<long>(x.width);
    for (std::size_t c = 0; c < x.channels; ++c)
        for (std::size_t y = 0; y < out.height; ++y) {
            const long sy = static_cast<long>(y) - static_cast<long>(P);
            const bool y_in = sy >= 0 && sy < h;
            if (mode == PadMode::zero && !y_in) continue;
            const std::size_t my = mode == PadMode::zero ? static_cast<std::size_t>(sy) : mirror(sy, h);
            for (std::size_t xx = 0; xx < out.width; ++xx) {
                const long sx = static_cast<long>(xx) - static_cast<long>(P);
                if (mode == PadMode::zero) {
                    if (sx >= 0 && sx < w) out.at(c, y, xx) = x.at(c, my, static_cast<std::size_t>(sx));
                } else {
                    out.at(c, y, xx) = x.at(c, my, mirror(sx, w));
                }
            }
        }
    return out;
}

// Scatter gradients of the padded tensor back onto the source entries.
Tensor3 unpad_grad(const Tensor3& gpad, std::size_t h, std::size_t w, PadMode mode) {
    Tensor3 out(gpad.channels, h, w);
    const long hh = static_cast<long>(h), ww = static_cast<long>(w);
    for (std::size_t c = 0; c < gpad.channels; ++c)
        for (std::size_t y = 0; y < gpad.height; ++y) {
            const long sy = static_cast<long>(y) - static_cast<long>(P);
            for (std::size_t x = 0; x < gpad.width; ++x) {
                const long sx = static_cast<long>(x) - static_cast<long>(P);
                if (mode == PadMode::zero) {
                    if (sy >= 0 && sy < hh && sx >= 0 && sx < ww)
                        out.at(c, static_cast<std::size_t>(sy), static_cast<std::size_t>(sx)) += gpad.at(c, y, x);
                } else {
                    out.at(c, mirror(sy, hh), mirror(sx, ww)) += gpad.at(c, y, x);
                }
            }
        }
    return out;
}

inline std::size_t out_dim(std::size_t n, std::size_t stride) {
    return (n + stride - 1) / stride;
}

}  // namespace

ConvLayer::ConvLayer(std::size_t in, std::size_t out, std::size_t s, PadMode p)
    : in_ch(in), out_ch(out), stride(s), pad(p),
      weights(out * in * kKernel * kKernel, 0.0), bias(out, 0.0) {
    if (s != 1 && s != 2) throw std::invalid_argument("conv: stride must be 1 or 2");
}

Tensor3 conv2d_forward(const Tensor3& x, const ConvLayer& layer) {
    if (x.channels != layer.in_ch) throw std::invalid_argument("conv: channel mismatch");
    const Tensor3 padded = pad_input(x, layer.pad);
    const std::size_t oh = out_dim(x.height, layer.stride);
    const std::size_t ow = out_dim(x.width, layer.stride);
    Tensor3 out(layer.out_ch, oh, ow);

    for (std::size_t oc = 0; oc < layer.out_ch; ++oc) {
        double* plane = &out.at(oc, 0, 0);
        const double b = layer.bias[oc];
        for (std::size_t i = 0; i < oh * ow; ++i) plane[i] = b;
        for (std::size_t ic = 0; ic < layer.in_ch; ++ic) {
            for (std::size_t ky = 0; ky < K; ++ky) {
                for (std::size_t kx = 0; kx < K; ++kx) {
                    const double wv = layer.w(oc, ic, ky, kx);
                    if (wv == 0.0) continue;
                    for (std::size_t oy = 0; oy < oh; ++oy) {
                        const double* src = &padded.at(ic, oy * layer.stride + ky, kx);
                        double* dst = plane + oy * ow;
                        if (layer.stride == 1) {
                            for (std::size_t ox = 0; ox < ow; ++ox) dst[ox] += wv * src[ox];
                        } else {
                            for (std::size_t ox = 0; ox < ow; ++ox) dst[ox] += wv * src[2 * ox];
                        }
                    }
                }
            }
        }
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor3& x, const ConvLayer& layer, const Tensor3& grad_out) {
    if (x.channels != layer.in_ch) throw std::invalid_argument("conv backward: channel mismatch");
    const std::size_t oh = out_dim(x.height, layer.stride);
    const std::size_t ow = out_dim(x.width, layer.stride);
    if (grad_out.channels != layer.out_ch || grad_out.height != oh || grad_out.width != ow)
        throw std::invalid_argument("conv backward: grad shape mismatch");

    const Tensor3 padded = pad_input(x, layer.pad);
    Tensor3 gpad(padded.channels, padded.height, padded.width);

    ConvGrads g;
    g.weights.assign(layer.weights.size(), 0.0);
    g.bias.assign(layer.bias.size(), 0.0);

    for (std::size_t oc = 0; oc < layer.out_ch; ++oc) {
        const double* gplane = &grad_out.at(oc, 0, 0);
        for (std::size_t i = 0; i < oh * ow; ++i) g.bias[oc] += gplane[i];
        for (std::size_t ic = 0; ic < layer.in_ch; ++ic) {
            for (std::size_t ky = 0; ky < K; ++ky) {
                for (std::size_t kx = 0; kx < K; ++kx) {
                    const double wv = layer.w(oc, ic, ky, kx);
                    double gw = 0.0;
                    for (std::size_t oy = 0; oy < oh; ++oy) {
                        const double* src = &padded.at(ic, oy * layer.stride + ky, kx);
                        double* gsrc = &gpad.at(ic, oy * layer.stride + ky, kx);
                        const double* go = gplane + oy * ow;
                        if (layer.stride == 1) {
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                gw += go[ox] * src[ox];
                                gsrc[ox] += go[ox] * wv;
                            }
                        } else {
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                gw += go[ox] * src[2 * ox];
                                gsrc[2 * ox] += go[ox] * wv;
                            }
                        }
                    }
                    g.weights[((oc * layer.in_ch + ic) * K + ky) * K + kx] = gw;
                }
            }
        }
    }
    g.input = unpad_grad(gpad, x.height, x.width, layer.pad);
    return g;
}

double swish_scalar(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return x * s;
}

double swish_grad_scalar(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

Tensor3 swish(const Tensor3& x) {
    Tensor3 out = x;
    for (double& v : out.data) v = swish_scalar(v);
    return out;
}

Tensor3 swish_backward(const Tensor3& x, const Tensor3& grad_out) {
    if (!x.same_shape(grad_out)) throw std::invalid_argument("swish backward: shape mismatch");
    Tensor3 grad = grad_out;
    for (std::size_t i = 0; i < grad.data.size(); ++i) grad.data[i] *= swish_grad_scalar(x.data[i]);
    return grad;
}

}  // namespace isar
