#pragma once

#include "isar/net.hpp"
#include "isar/sampling.hpp"

namespace isar {

struct EarlyStopConfig {
    bool enabled = true;
    double rel_improve = 0.01;   // "1% or less improvement"
    std::size_t patience = 3;
    std::size_t check_every = 10;
    // the rule only arms after this many iterations: the SNR curve has an
    // early plateau before the oscillatory structure is picked up, and
    // stopping there would freeze the net at the mean level
    std::size_t min_iters = 200;
};

struct DipConfig {
    NetworkConfig net;
    std::size_t max_iters = 10000;
    double lr = 1e-3;
    double input_noise_std = 0.1;
    std::size_t noise_channels = 16;  // C' of the fixed noise input z
    EarlyStopConfig early_stop;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Observed-entry min/max affine map used before/after optimization.
struct NormalizationRecord {
    double lo = 0.0;
    double hi = 1.0;
    bool degenerate = false;
};

struct TracePoint {
    std::size_t iter = 0;
    double loss = 0.0;     // masked MSE in input units
    double snr_db = 0.0;   // SNR vs observed entries, last computed
    double elapsed_s = 0.0;
};

struct DipPartResult {
    RealMatrix completed;
    std::vector<TracePoint> trace;
    bool early_stopped = false;
    bool degenerate = false;
    std::size_t iterations = 0;
};

struct DipComplexResult {
    ComplexMatrix completed;
    DipPartResult real_part;
    DipPartResult imag_part;
};

std::pair<RealMatrix, NormalizationRecord> normalize(const RealMatrix& part, const Mask& mask);
RealMatrix denormalize(const RealMatrix& y, const NormalizationRecord& rec);

struct MaskedMse {
    double value = 0.0;
    RealMatrix grad;
};

/// Sum of squared differences over observed entries / observed count;
/// gradient w.r.t. pred is zero off the mask.
MaskedMse masked_mse(const RealMatrix& pred, const RealMatrix& target, const Mask& mask);

/// True iff the most recent `patience` consecutive relative SNR
/// improvements are each <= rel_improve.
bool check_snr_early_stop(const std::vector<double>& snr_history, double rel_improve,
                          std::size_t patience);

DipPartResult dip_complete_part(const RealMatrix& part, const Mask& mask, const DipConfig& cfg);

/// Real and imaginary parts completed by independent networks (seeds
/// cfg.seed and cfg.seed ^ 1) and merged.
DipComplexResult dip_complete_complex(const ComplexMatrix& m, const Mask& mask, const DipConfig& cfg);

std::string trace_to_csv(const std::vector<TracePoint>& trace);

}  // namespace isar
