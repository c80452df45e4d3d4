#include "isar/net.hpp"

#include <cmath>

namespace isar {

AdamState make_adam_state(const std::vector<std::vector<double>*>& params, double lr) {
    AdamState s;
    s.lr = lr;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const auto* p : params) {
        s.m.emplace_back(p->size(), 0.0);
        s.v.emplace_back(p->size(), 0.0);
    }
    return s;
}

void adam_step(std::vector<std::vector<double>*>& params, const NetGradients& grads, AdamState& state) {
    if (params.size() != grads.tensors.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam_step: tensor count mismatch");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::vector<double>& p = *params[i];
        const std::vector<double>& g = grads.tensors[i];
        if (p.size() != g.size()) throw std::invalid_argument("adam_step: shape mismatch");
        std::vector<double>& m = state.m[i];
        std::vector<double>& v = state.v[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
            v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            p[k] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

}  // namespace isar
