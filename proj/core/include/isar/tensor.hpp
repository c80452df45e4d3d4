#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isar {

/// C x H x W tensor, row-major within each channel plane.
struct Tensor3 {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(std::size_t c, std::size_t h, std::size_t w)
        : channels(c), height(h), width(w), data(c * h * w, 0.0) {}

    double& at(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * height + y) * width + x];
    }
    const double& at(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * height + y) * width + x];
    }
    std::size_t size() const { return channels * height * width; }
    bool same_shape(const Tensor3& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

/// Nearest-neighbor 2x upsampling; backward sums the 2x2 fan-out.
Tensor3 upsample_nearest2x(const Tensor3& x);
Tensor3 upsample_nearest2x_backward(const Tensor3& grad_out, std::size_t in_h, std::size_t in_w);

/// Center crop to (h, w); throws when the target exceeds the input.
Tensor3 center_crop(const Tensor3& x, std::size_t h, std::size_t w);
Tensor3 center_crop_backward(const Tensor3& grad_out, std::size_t in_h, std::size_t in_w);

Tensor3 concat_channels(const Tensor3& a, const Tensor3& b);

}  // namespace isar
