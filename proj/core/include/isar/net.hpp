#pragma once

#include <cstdint>
#include <memory>

#include "isar/conv.hpp"
#include "isar/tensor.hpp"

namespace isar {

struct NetworkConfig {
    std::size_t depth = 6;
    std::vector<std::size_t> channels = {256, 128, 64, 64, 128, 256};
    std::size_t skip_channels = 16;
    std::uint64_t seed = 0;
    PadMode pad = PadMode::reflect;
    bool instance_norm = false;

    void validate() const;
};

/// Gradients for every parameter tensor, in params() order.
struct NetGradients {
    std::vector<std::vector<double>> tensors;
};

/// Encoder-decoder generator with convolutional skip branches.
///
/// Stage layout for depth d: d/2 encoder stages (stride-2 conv + Swish),
/// a stride-1 bottleneck stage when d is odd, and d/2 decoder stages
/// (nearest 2x upsample + crop + skip concat + conv + Swish), closed by a
/// linear 1-channel conv. Skip branches tap the encoder activations at
/// every intermediate resolution through their own 5x5 convolutions
/// (identity-gated), and are concatenated in front of the decoder conv.
class SkipNet {
  public:
    SkipNet(const NetworkConfig& cfg, std::size_t in_channels);
    SkipNet(SkipNet&&) noexcept;
    SkipNet& operator=(SkipNet&&) noexcept;
    ~SkipNet();

    /// Deterministic forward pass; caches activations for backward().
    Tensor3 forward(const Tensor3& z);

    /// Exact reverse-mode gradients w.r.t. all parameters; consumes the
    /// cache of the preceding forward(). Throws without a forward pass.
    NetGradients backward(const Tensor3& grad_out);

    /// Parameter tensors in a fixed order (weights, bias per conv layer).
    std::vector<std::vector<double>*> params();

    const NetworkConfig& config() const { return cfg_; }
    std::size_t in_channels() const { return in_channels_; }

  private:
    struct StageCache;

    Tensor3 run_norm_act(const ConvLayer& layer, const Tensor3& pre, StageCache& cache, bool linear);
    Tensor3 norm_act_backward(const StageCache& cache, const Tensor3& grad, bool linear) const;

    NetworkConfig cfg_;
    std::size_t in_channels_ = 0;
    std::size_t n_down_ = 0;
    bool has_bottleneck_ = false;

    std::vector<ConvLayer> enc_;
    std::vector<ConvLayer> skip_;
    ConvLayer bottleneck_;
    std::vector<ConvLayer> dec_;
    ConvLayer final_;

    struct Cache;
    std::unique_ptr<Cache> cache_;
};

struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    std::size_t t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam_state(const std::vector<std::vector<double>*>& params, double lr = 1e-3);

/// Bias-corrected Adam update, in place.
void adam_step(std::vector<std::vector<double>*>& params, const NetGradients& grads, AdamState& state);

}  // namespace isar
