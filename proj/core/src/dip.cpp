#include "isar/dip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "isar/metrics.hpp"

namespace isar {

void DipConfig::validate() const {
    net.validate();
    if (max_iters < 1) throw std::invalid_argument("dip: max_iters must be >= 1");
    if (lr <= 0.0) throw std::invalid_argument("dip: lr must be > 0");
    if (input_noise_std <= 0.0) throw std::invalid_argument("dip: input_noise_std must be > 0");
    if (noise_channels < 1) throw std::invalid_argument("dip: noise_channels must be >= 1");
    if (early_stop.rel_improve <= 0.0 || early_stop.rel_improve >= 1.0)
        throw std::invalid_argument("dip: rel_improve must be in (0,1)");
    if (early_stop.patience < 1) throw std::invalid_argument("dip: patience must be >= 1");
    if (early_stop.check_every < 1) throw std::invalid_argument("dip: check_every must be >= 1");
}

std::pair<RealMatrix, NormalizationRecord> normalize(const RealMatrix& part, const Mask& mask) {
    if (part.rows != mask.rows || part.cols != mask.cols)
        throw std::invalid_argument("normalize: dimension mismatch");
    bool any = false;
    NormalizationRecord rec;
    for (std::size_t i = 0; i < part.data.size(); ++i) {
        if (!mask.observed[i]) continue;
        if (!any) {
            rec.lo = rec.hi = part.data[i];
            any = true;
        } else {
            rec.lo = std::min(rec.lo, part.data[i]);
            rec.hi = std::max(rec.hi, part.data[i]);
        }
    }
    if (!any) throw std::invalid_argument("normalize: empty mask");

    RealMatrix out(part.rows, part.cols);
    if (rec.hi == rec.lo) {
        rec.degenerate = true;
        for (double& v : out.data) v = 0.5;
        return {out, rec};
    }
    const double inv = 1.0 / (rec.hi - rec.lo);
    for (std::size_t i = 0; i < part.data.size(); ++i)
        out.data[i] = (part.data[i] - rec.lo) * inv;
    return {out, rec};
}

RealMatrix denormalize(const RealMatrix& y, const NormalizationRecord& rec) {
    RealMatrix out(y.rows, y.cols);
    if (rec.degenerate) {
        for (double& v : out.data) v = rec.lo;
        return out;
    }
    for (std::size_t i = 0; i < y.data.size(); ++i)
        out.data[i] = y.data[i] * (rec.hi - rec.lo) + rec.lo;
    return out;
}

MaskedMse masked_mse(const RealMatrix& pred, const RealMatrix& target, const Mask& mask) {
    if (!pred.same_shape(target) || pred.rows != mask.rows || pred.cols != mask.cols)
        throw std::invalid_argument("masked_mse: shape mismatch");
    const auto count = mask.observed_count();
    if (count == 0) throw std::invalid_argument("masked_mse: empty mask");

    MaskedMse out;
    out.grad = RealMatrix(pred.rows, pred.cols);
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        if (!mask.observed[i]) continue;
        const double d = pred.data[i] - target.data[i];
        out.value += d * d * inv;
        out.grad.data[i] = 2.0 * d * inv;
    }
    return out;
}

bool check_snr_early_stop(const std::vector<double>& snr_history, double rel_improve,
                          std::size_t patience) {
    if (snr_history.size() < patience + 1) return false;
    for (std::size_t k = snr_history.size() - patience; k < snr_history.size(); ++k) {
        const double prev = snr_history[k - 1];
        const double imp = (snr_history[k] - prev) / std::max(std::abs(prev), 1e-300);
        if (imp > rel_improve) return false;
    }
    return true;
}

DipPartResult dip_complete_part(const RealMatrix& part, const Mask& mask, const DipConfig& cfg) {
    cfg.validate();
    if (!all_finite(part)) throw std::invalid_argument("dip: non-finite input");

    auto [target, rec] = normalize(part, mask);
    DipPartResult out;
    if (rec.degenerate) {
        out.completed = denormalize(target, rec);
        out.degenerate = true;
        return out;
    }

    NetworkConfig nc = cfg.net;
    nc.seed = cfg.seed;
    SkipNet net(nc, cfg.noise_channels);
    auto params = net.params();
    AdamState adam = make_adam_state(params, cfg.lr);

    // fixed white-noise code tensor
    Tensor3 z(cfg.noise_channels, part.rows, part.cols);
    {
        std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> gauss(0.0, cfg.input_noise_std);
        for (double& v : z.data) v = gauss(rng);
    }

    std::vector<double> obs_target;
    obs_target.reserve(mask.observed_count());
    for (std::size_t i = 0; i < target.data.size(); ++i)
        if (mask.observed[i]) obs_target.push_back(target.data[i]);

    const double unit_sq = (rec.hi - rec.lo) * (rec.hi - rec.lo);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> snr_history;
    double last_snr = 0.0;
    RealMatrix pred(part.rows, part.cols);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        Tensor3 y = net.forward(z);
        std::copy(y.data.begin(), y.data.end(), pred.data.begin());

        MaskedMse mse = masked_mse(pred, target, mask);

        const bool check = (it % cfg.early_stop.check_every == 0) || it == cfg.max_iters || it == 1;
        if (check) {
            std::vector<double> obs_pred;
            obs_pred.reserve(obs_target.size());
            for (std::size_t i = 0; i < pred.data.size(); ++i)
                if (mask.observed[i]) obs_pred.push_back(pred.data[i]);
            last_snr = snr_db(obs_target, obs_pred);
            if (it % cfg.early_stop.check_every == 0) snr_history.push_back(last_snr);
        }

        Tensor3 grad_y(1, part.rows, part.cols);
        std::copy(mse.grad.data.begin(), mse.grad.data.end(), grad_y.data.begin());
        NetGradients grads = net.backward(grad_y);
        adam_step(params, grads, adam);

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.trace.push_back({it, mse.value * unit_sq, last_snr, elapsed});
        out.iterations = it;

        // arm only once every improvement under test lies past the warmup
        const bool armed =
            snr_history.size() >=
            cfg.early_stop.min_iters / cfg.early_stop.check_every + cfg.early_stop.patience + 1;
        if (cfg.early_stop.enabled && armed &&
            check_snr_early_stop(snr_history, cfg.early_stop.rel_improve, cfg.early_stop.patience)) {
            out.early_stopped = true;
            break;
        }
    }

    out.completed = denormalize(pred, rec);
    return out;
}

DipComplexResult dip_complete_complex(const ComplexMatrix& m, const Mask& mask, const DipConfig& cfg) {
    RealMatrix re, im;
    split_complex(m, re, im);

    DipConfig cfg_re = cfg;
    DipConfig cfg_im = cfg;
    cfg_im.seed = cfg.seed ^ 1ULL;

    DipComplexResult out;
    out.real_part = dip_complete_part(re, mask, cfg_re);
    out.imag_part = dip_complete_part(im, mask, cfg_im);
    out.completed = merge_complex(out.real_part.completed, out.imag_part.completed);
    return out;
}

std::string trace_to_csv(const std::vector<TracePoint>& trace) {
    std::ostringstream os;
    os.precision(12);
    os << "iter,loss,snr_db,elapsed_s\n";
    for (const auto& t : trace)
        os << t.iter << ',' << t.loss << ',' << t.snr_db << ',' << t.elapsed_s << '\n';
    return os.str();
}

}  // namespace isar
