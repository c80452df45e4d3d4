#include "isar/net.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace isar {

void NetworkConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("net: depth must be >= 1");
    if (channels.size() != depth) throw std::invalid_argument("net: depth must equal channels length");
    for (std::size_t c : channels)
        if (c < 1) throw std::invalid_argument("net: channel widths must be >= 1");
    if (skip_channels < 1) throw std::invalid_argument("net: skip_channels must be >= 1");
}

namespace {

constexpr double kNormEps = 1e-5;

void init_layer(ConvLayer& layer, std::mt19937_64& rng) {
    const double a = std::sqrt(1.0 / (static_cast<double>(layer.in_ch) * 25.0));
    std::uniform_real_distribution<double> dist(-a, a);
    for (double& w : layer.weights) w = dist(rng);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
}

}  // namespace

struct SkipNet::StageCache {
    Tensor3 conv_in;
    Tensor3 pre;     // conv output, before normalization
    Tensor3 normed;  // swish input when instance norm is on
    std::vector<double> mean, istd;
};

struct SkipNet::Cache {
    bool valid = false;
    Tensor3 z;
    std::vector<StageCache> enc;
    std::vector<Tensor3> enc_out;
    std::vector<StageCache> skip;   // conv_in = encoder activation, pre = tap (linear)
    StageCache bottleneck;
    Tensor3 bottleneck_out;
    std::vector<StageCache> dec;
    struct DecDims {
        std::size_t in_h, in_w;    // u_j dims before upsample
        std::size_t crop_h, crop_w;
        std::size_t tap = SIZE_MAX;  // skip tap index, SIZE_MAX if none
    };
    std::vector<DecDims> dec_dims;
    Tensor3 final_in;
};

SkipNet::SkipNet(SkipNet&&) noexcept = default;
SkipNet& SkipNet::operator=(SkipNet&&) noexcept = default;
SkipNet::~SkipNet() = default;

SkipNet::SkipNet(const NetworkConfig& cfg, std::size_t in_channels)
    : cfg_(cfg), in_channels_(in_channels), cache_(std::make_unique<Cache>()) {
    cfg_.validate();
    if (in_channels < 1) throw std::invalid_argument("net: input channels must be >= 1");

    n_down_ = cfg_.depth / 2;
    has_bottleneck_ = (cfg_.depth % 2) != 0;

    std::size_t prev = in_channels_;
    for (std::size_t i = 0; i < n_down_; ++i) {
        enc_.emplace_back(prev, cfg_.channels[i], 2, cfg_.pad);
        prev = cfg_.channels[i];
    }
    const std::size_t n_skip = n_down_ >= 1 ? n_down_ - 1 : 0;
    for (std::size_t i = 0; i < n_skip; ++i)
        skip_.emplace_back(cfg_.channels[i], cfg_.skip_channels, 1, cfg_.pad);
    if (has_bottleneck_) {
        bottleneck_ = ConvLayer(prev, cfg_.channels[n_down_], 1, cfg_.pad);
        prev = cfg_.channels[n_down_];
    }
    const std::size_t dec_base = n_down_ + (has_bottleneck_ ? 1 : 0);
    for (std::size_t j = 0; j < n_down_; ++j) {
        const bool has_tap = j + 1 < n_down_;
        const std::size_t in_ch = prev + (has_tap ? cfg_.skip_channels : 0);
        dec_.emplace_back(in_ch, cfg_.channels[dec_base + j], 1, cfg_.pad);
        prev = cfg_.channels[dec_base + j];
    }
    final_ = ConvLayer(prev, 1, 1, cfg_.pad);

    std::mt19937_64 rng(cfg_.seed);
    for (auto& l : enc_) init_layer(l, rng);
    for (auto& l : skip_) init_layer(l, rng);
    if (has_bottleneck_) init_layer(bottleneck_, rng);
    for (auto& l : dec_) init_layer(l, rng);
    init_layer(final_, rng);
}

Tensor3 SkipNet::run_norm_act(const ConvLayer& layer, const Tensor3& pre, StageCache& cache, bool linear) {
    (void)layer;
    cache.pre = pre;
    const Tensor3* act_in = &cache.pre;
    if (cfg_.instance_norm && !linear) {
        const std::size_t hw = pre.height * pre.width;
        cache.mean.resize(pre.channels);
        cache.istd.resize(pre.channels);
        cache.normed = Tensor3(pre.channels, pre.height, pre.width);
        for (std::size_t c = 0; c < pre.channels; ++c) {
            const double* src = &pre.data[c * hw];
            double mu = 0.0;
            for (std::size_t i = 0; i < hw; ++i) mu += src[i];
            mu /= static_cast<double>(hw);
            double var = 0.0;
            for (std::size_t i = 0; i < hw; ++i) var += (src[i] - mu) * (src[i] - mu);
            var /= static_cast<double>(hw);
            const double istd = 1.0 / std::sqrt(var + kNormEps);
            cache.mean[c] = mu;
            cache.istd[c] = istd;
            double* dst = &cache.normed.data[c * hw];
            for (std::size_t i = 0; i < hw; ++i) dst[i] = (src[i] - mu) * istd;
        }
        act_in = &cache.normed;
    }
    return linear ? *act_in : swish(*act_in);
}

Tensor3 SkipNet::norm_act_backward(const StageCache& cache, const Tensor3& grad, bool linear) const {
    Tensor3 g = grad;
    if (!linear) {
        const Tensor3& act_in = (cfg_.instance_norm && !cache.normed.data.empty()) ? cache.normed : cache.pre;
        g = swish_backward(act_in, g);
    }
    if (cfg_.instance_norm && !linear) {
        // backprop through (x - mu) * istd with batch statistics
        const std::size_t hw = cache.pre.height * cache.pre.width;
        Tensor3 gx(cache.pre.channels, cache.pre.height, cache.pre.width);
        for (std::size_t c = 0; c < cache.pre.channels; ++c) {
            const double* x = &cache.pre.data[c * hw];
            const double* dy = &g.data[c * hw];
            const double mu = cache.mean[c];
            const double istd = cache.istd[c];
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (std::size_t i = 0; i < hw; ++i) {
                sum_dy += dy[i];
                sum_dy_xhat += dy[i] * (x[i] - mu) * istd;
            }
            const double n = static_cast<double>(hw);
            double* dst = &gx.data[c * hw];
            for (std::size_t i = 0; i < hw; ++i) {
                const double xhat = (x[i] - mu) * istd;
                dst[i] = istd * (dy[i] - sum_dy / n - xhat * sum_dy_xhat / n);
            }
        }
        return gx;
    }
    return g;
}

Tensor3 SkipNet::forward(const Tensor3& z) {
    if (z.channels != in_channels_) throw std::invalid_argument("net: input channel mismatch");
    Cache& c = *cache_;
    c = Cache{};
    c.z = z;
    c.enc.resize(enc_.size());
    c.skip.resize(skip_.size());
    c.dec.resize(dec_.size());
    c.dec_dims.resize(dec_.size());
    c.enc_out.resize(enc_.size());

    Tensor3 cur = z;
    for (std::size_t i = 0; i < enc_.size(); ++i) {
        c.enc[i].conv_in = cur;
        Tensor3 pre = conv2d_forward(cur, enc_[i]);
        cur = run_norm_act(enc_[i], std::move(pre), c.enc[i], false);
        c.enc_out[i] = cur;
    }

    std::vector<Tensor3> taps(skip_.size());
    for (std::size_t i = 0; i < skip_.size(); ++i) {
        c.skip[i].conv_in = c.enc_out[i];
        taps[i] = conv2d_forward(c.enc_out[i], skip_[i]);  // linear branch
    }

    if (has_bottleneck_) {
        c.bottleneck.conv_in = cur;
        Tensor3 pre = conv2d_forward(cur, bottleneck_);
        cur = run_norm_act(bottleneck_, std::move(pre), c.bottleneck, false);
        c.bottleneck_out = cur;
    }

    for (std::size_t j = 0; j < dec_.size(); ++j) {
        auto& dd = c.dec_dims[j];
        dd.in_h = cur.height;
        dd.in_w = cur.width;
        Tensor3 up = upsample_nearest2x(cur);
        const std::size_t tap_idx = (j + 1 < n_down_) ? n_down_ - 2 - j : SIZE_MAX;
        std::size_t target_h, target_w;
        if (tap_idx != SIZE_MAX) {
            target_h = taps[tap_idx].height;
            target_w = taps[tap_idx].width;
        } else {
            target_h = c.z.height;
            target_w = c.z.width;
        }
        dd.crop_h = target_h;
        dd.crop_w = target_w;
        dd.tap = tap_idx;
        Tensor3 merged = center_crop(up, target_h, target_w);
        if (tap_idx != SIZE_MAX) merged = concat_channels(merged, taps[tap_idx]);
        c.dec[j].conv_in = merged;
        Tensor3 pre = conv2d_forward(merged, dec_[j]);
        cur = run_norm_act(dec_[j], std::move(pre), c.dec[j], false);
    }

    c.final_in = cur;
    Tensor3 out = conv2d_forward(cur, final_);
    c.valid = true;
    return out;
}

std::vector<std::vector<double>*> SkipNet::params() {
    std::vector<std::vector<double>*> p;
    auto add = [&](ConvLayer& l) {
        p.push_back(&l.weights);
        p.push_back(&l.bias);
    };
    for (auto& l : enc_) add(l);
    for (auto& l : skip_) add(l);
    if (has_bottleneck_) add(bottleneck_);
    for (auto& l : dec_) add(l);
    add(final_);
    return p;
}

NetGradients SkipNet::backward(const Tensor3& grad_out) {
    Cache& c = *cache_;
    if (!c.valid) throw std::logic_error("net: backward without forward");
    c.valid = false;

    std::vector<std::vector<double>> genc_w(enc_.size()), genc_b(enc_.size());
    std::vector<std::vector<double>> gskip_w(skip_.size()), gskip_b(skip_.size());
    std::vector<double> gbot_w, gbot_b;
    std::vector<std::vector<double>> gdec_w(dec_.size()), gdec_b(dec_.size());

    // final linear conv
    ConvGrads gf = conv2d_backward(c.final_in, final_, grad_out);
    Tensor3 grad_cur = std::move(gf.input);

    std::vector<Tensor3> grad_taps(skip_.size());

    for (std::size_t jj = dec_.size(); jj-- > 0;) {
        Tensor3 g = norm_act_backward(c.dec[jj], grad_cur, false);
        ConvGrads gc = conv2d_backward(c.dec[jj].conv_in, dec_[jj], g);
        gdec_w[jj] = std::move(gc.weights);
        gdec_b[jj] = std::move(gc.bias);

        const auto& dd = c.dec_dims[jj];
        Tensor3 merged_grad = std::move(gc.input);
        Tensor3 crop_grad;
        if (dd.tap != SIZE_MAX) {
            const std::size_t main_ch = merged_grad.channels - cfg_.skip_channels;
            crop_grad = Tensor3(main_ch, merged_grad.height, merged_grad.width);
            Tensor3 tap_grad(cfg_.skip_channels, merged_grad.height, merged_grad.width);
            std::copy_n(merged_grad.data.begin(), crop_grad.size(), crop_grad.data.begin());
            std::copy_n(merged_grad.data.begin() + static_cast<std::ptrdiff_t>(crop_grad.size()),
                        tap_grad.size(), tap_grad.data.begin());
            grad_taps[dd.tap] = std::move(tap_grad);
        } else {
            crop_grad = std::move(merged_grad);
        }
        Tensor3 up_grad = center_crop_backward(crop_grad, dd.in_h * 2, dd.in_w * 2);
        grad_cur = upsample_nearest2x_backward(up_grad, dd.in_h, dd.in_w);
    }

    if (has_bottleneck_) {
        Tensor3 g = norm_act_backward(c.bottleneck, grad_cur, false);
        ConvGrads gc = conv2d_backward(c.bottleneck.conv_in, bottleneck_, g);
        gbot_w = std::move(gc.weights);
        gbot_b = std::move(gc.bias);
        grad_cur = std::move(gc.input);
    }

    for (std::size_t ii = enc_.size(); ii-- > 0;) {
        // skip branch contribution into the encoder activation
        if (ii < skip_.size() && !grad_taps[ii].data.empty()) {
            ConvGrads gs = conv2d_backward(c.skip[ii].conv_in, skip_[ii], grad_taps[ii]);
            gskip_w[ii] = std::move(gs.weights);
            gskip_b[ii] = std::move(gs.bias);
            for (std::size_t k = 0; k < grad_cur.data.size(); ++k)
                grad_cur.data[k] += gs.input.data[k];
        } else if (ii < skip_.size()) {
            gskip_w[ii].assign(skip_[ii].weights.size(), 0.0);
            gskip_b[ii].assign(skip_[ii].bias.size(), 0.0);
        }
        Tensor3 g = norm_act_backward(c.enc[ii], grad_cur, false);
        ConvGrads gc = conv2d_backward(c.enc[ii].conv_in, enc_[ii], g);
        genc_w[ii] = std::move(gc.weights);
        genc_b[ii] = std::move(gc.bias);
        grad_cur = std::move(gc.input);
    }

    NetGradients out;
    for (std::size_t i = 0; i < enc_.size(); ++i) {
        out.tensors.push_back(std::move(genc_w[i]));
        out.tensors.push_back(std::move(genc_b[i]));
    }
    for (std::size_t i = 0; i < skip_.size(); ++i) {
        out.tensors.push_back(std::move(gskip_w[i]));
        out.tensors.push_back(std::move(gskip_b[i]));
    }
    if (has_bottleneck_) {
        out.tensors.push_back(std::move(gbot_w));
        out.tensors.push_back(std::move(gbot_b));
    }
    for (std::size_t i = 0; i < dec_.size(); ++i) {
        out.tensors.push_back(std::move(gdec_w[i]));
        out.tensors.push_back(std::move(gdec_b[i]));
    }
    out.tensors.push_back(std::move(gf.weights));
    out.tensors.push_back(std::move(gf.bias));
    return out;
}

}  // namespace isar
