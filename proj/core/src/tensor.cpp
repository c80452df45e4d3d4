#include "isar/tensor.hpp"

namespace isar {

Tensor3 upsample_nearest2x(const Tensor3& x) {
    Tensor3 out(x.channels, x.height * 2, x.width * 2);
    for (std::size_t c = 0; c < x.channels; ++c)
        for (std::size_t y = 0; y < out.height; ++y)
            for (std::size_t xx = 0; xx < out.width; ++xx)
                out.at(c, y, xx) = x.at(c, y / 2, xx / 2);
    return out;
}

Tensor3 upsample_nearest2x_backward(const Tensor3& grad_out, std::size_t in_h, std::size_t in_w) {
    if (grad_out.height != in_h * 2 || grad_out.width != in_w * 2)
        throw std::invalid_argument("upsample backward: shape mismatch");
    Tensor3 grad(grad_out.channels, in_h, in_w);
    for (std::size_t c = 0; c < grad_out.channels; ++c)
        for (std::size_t y = 0; y < grad_out.height; ++y)
            for (std::size_t x = 0; x < grad_out.width; ++x)
                grad.at(c, y / 2, x / 2) += grad_out.at(c, y, x);
    return grad;
}

Tensor3 center_crop(const Tensor3& x, std::size_t h, std::size_t w) {
    if (h > x.height || w > x.width) throw std::invalid_argument("center_crop: target too large");
    const std::size_t oy = (x.height - h) / 2;
    const std::size_t ox = (x.width - w) / 2;
    Tensor3 out(x.channels, h, w);
    for (std::size_t c = 0; c < x.channels; ++c)
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t xx = 0; xx < w; ++xx)
                out.at(c, y, xx) = x.at(c, y + oy, xx + ox);
    return out;
}

Tensor3 center_crop_backward(const Tensor3& grad_out, std::size_t in_h, std::size_t in_w) {
    const std::size_t oy = (in_h - grad_out.height) / 2;
    const std::size_t ox = (in_w - grad_out.width) / 2;
    Tensor3 grad(grad_out.channels, in_h, in_w);
    for (std::size_t c = 0; c < grad_out.channels; ++c)
        for (std::size_t y = 0; y < grad_out.height; ++y)
            for (std::size_t x = 0; x < grad_out.width; ++x)
                grad.at(c, y + oy, x + ox) = grad_out.at(c, y, x);
    return grad;
}

Tensor3 concat_channels(const Tensor3& a, const Tensor3& b) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument("concat_channels: spatial mismatch");
    Tensor3 out(a.channels + b.channels, a.height, a.width);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

}  // namespace isar
