#include <doctest.h>

#include <random>

#include "isar/net.hpp"

using namespace isar;

namespace {

void fill_random(std::vector<double>& v, std::mt19937_64& rng, double scale = 0.5) {
    std::uniform_real_distribution<double> u(-scale, scale);
    for (auto& x : v) x = u(rng);
}

// quadruple-loop reference convolution, zero padding only
Tensor3 conv_oracle_zero_pad(const Tensor3& x, const ConvLayer& layer) {
    const std::size_t oh = (x.height + layer.stride - 1) / layer.stride;
    const std::size_t ow = (x.width + layer.stride - 1) / layer.stride;
    Tensor3 out(layer.out_ch, oh, ow);
    for (std::size_t oc = 0; oc < layer.out_ch; ++oc)
        for (std::size_t oy = 0; oy < oh; ++oy)
            for (std::size_t ox = 0; ox < ow; ++ox) {
                double acc = layer.bias[oc];
                for (std::size_t ic = 0; ic < layer.in_ch; ++ic)
                    for (std::size_t ky = 0; ky < 5; ++ky)
                        for (std::size_t kx = 0; kx < 5; ++kx) {
                            const long iy = long(oy * layer.stride + ky) - 2;
                            const long ix = long(ox * layer.stride + kx) - 2;
                            if (iy < 0 || ix < 0 || iy >= long(x.height) || ix >= long(x.width))
                                continue;
                            acc += layer.w(oc, ic, ky, kx) * x.at(ic, iy, ix);
                        }
                out.at(oc, oy, ox) = acc;
            }
    return out;
}

double dot(const Tensor3& a, const Tensor3& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

}  // namespace

TEST_CASE("conv identity kernel passes the input through") {
    ConvLayer layer(2, 2, 1, PadMode::reflect);
    layer.w(0, 0, 2, 2) = 1.0;
    layer.w(1, 1, 2, 2) = 1.0;
    Tensor3 x(2, 4, 4);
    std::mt19937_64 rng(1);
    fill_random(x.data, rng);
    const auto y = conv2d_forward(x, layer);
    REQUIRE(y.same_shape(x));
    for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("conv constant input, all-ones kernel") {
    ConvLayer layer(1, 1, 1, PadMode::zero);
    for (auto& w : layer.weights) w = 1.0;
    Tensor3 x(1, 8, 8);
    for (auto& v : x.data) v = 0.7;
    const auto y = conv2d_forward(x, layer);
    CHECK(y.at(0, 4, 4) == doctest::Approx(25 * 0.7).epsilon(1e-13));
    // reflect padding makes the border behave like the interior
    ConvLayer refl(1, 1, 1, PadMode::reflect);
    for (auto& w : refl.weights) w = 1.0;
    const auto yr = conv2d_forward(x, refl);
    CHECK(yr.at(0, 0, 0) == doctest::Approx(25 * 0.7).epsilon(1e-13));
}

TEST_CASE("conv matches the quadruple-loop oracle") {
    std::mt19937_64 rng(42);
    for (std::size_t stride : {std::size_t{1}, std::size_t{2}}) {
        ConvLayer layer(3, 2, stride, PadMode::zero);
        fill_random(layer.weights, rng);
        fill_random(layer.bias, rng);
        Tensor3 x(3, 7, 6);
        fill_random(x.data, rng);
        const auto fast = conv2d_forward(x, layer);
        const auto slow = conv_oracle_zero_pad(x, layer);
        REQUIRE(fast.same_shape(slow));
        for (std::size_t i = 0; i < fast.data.size(); ++i)
            CHECK(std::abs(fast.data[i] - slow.data[i]) <= 1e-12);
    }
}

TEST_CASE("conv backward: finite differences") {
    std::mt19937_64 rng(7);
    for (auto pad : {PadMode::reflect, PadMode::zero}) {
        for (std::size_t stride : {std::size_t{1}, std::size_t{2}}) {
            ConvLayer layer(2, 3, stride, pad);
            fill_random(layer.weights, rng);
            fill_random(layer.bias, rng);
            Tensor3 x(2, 6, 6);
            fill_random(x.data, rng);

            auto y0 = conv2d_forward(x, layer);
            Tensor3 g(y0.channels, y0.height, y0.width);
            fill_random(g.data, rng);
            const auto grads = conv2d_backward(x, layer, g);

            const double h = 1e-6;
            double worst = 0.0;
            auto check_param = [&](double& p, double analytic) {
                const double keep = p;
                p = keep + h;
                const double up = dot(conv2d_forward(x, layer), g);
                p = keep - h;
                const double dn = dot(conv2d_forward(x, layer), g);
                p = keep;
                const double num = (up - dn) / (2.0 * h);
                const double rel = std::abs(num - analytic) / std::max(std::abs(num), 1.0);
                worst = std::max(worst, rel);
            };
            for (std::size_t i = 0; i < layer.weights.size(); i += 17)
                check_param(layer.weights[i], grads.weights[i]);
            for (std::size_t i = 0; i < layer.bias.size(); ++i)
                check_param(layer.bias[i], grads.bias[i]);
            for (std::size_t i = 0; i < x.data.size(); i += 7)
                check_param(x.data[i], grads.input.data[i]);
            CHECK(worst < 1e-5);
        }
    }
}

TEST_CASE("conv backward trivial properties") {
    std::mt19937_64 rng(3);
    ConvLayer layer(2, 2, 1, PadMode::reflect);
    fill_random(layer.weights, rng);
    Tensor3 x(2, 5, 5);
    fill_random(x.data, rng);

    Tensor3 zero_g(2, 5, 5);
    auto g0 = conv2d_backward(x, layer, zero_g);
    for (double v : g0.weights) CHECK(v == 0.0);
    for (double v : g0.bias) CHECK(v == 0.0);
    for (double v : g0.input.data) CHECK(v == 0.0);

    Tensor3 g(2, 5, 5);
    fill_random(g.data, rng);
    auto gr = conv2d_backward(x, layer, g);
    for (std::size_t oc = 0; oc < 2; ++oc) {
        double s = 0.0;
        for (std::size_t y = 0; y < 5; ++y)
            for (std::size_t xx = 0; xx < 5; ++xx) s += g.at(oc, y, xx);
        CHECK(gr.bias[oc] == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("swish values and gradient") {
    CHECK(swish_scalar(0.0) == 0.0);
    CHECK(swish_grad_scalar(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(swish_scalar(20.0) == doctest::Approx(20.0).epsilon(1e-7));

    const double h = 1e-6;
    for (double x : {-3.0, -0.5, 0.1, 2.0, 9.0}) {
        const double num = (swish_scalar(x + h) - swish_scalar(x - h)) / (2.0 * h);
        CHECK(std::abs(num - swish_grad_scalar(x)) < 1e-7);
    }
}

TEST_CASE("upsample and crop shapes") {
    Tensor3 c(1, 2, 2);
    for (auto& v : c.data) v = 3.25;
    const auto up = upsample_nearest2x(c);
    REQUIRE(up.height == 4);
    REQUIRE(up.width == 4);
    for (double v : up.data) CHECK(v == 3.25);

    // stride-2 conv dim = ceil(n/2); up-then-crop restores any size 3..17
    for (std::size_t n = 3; n <= 17; ++n) {
        const std::size_t down = (n + 1) / 2;
        Tensor3 t(1, down, down);
        const auto u = upsample_nearest2x(t);
        const auto back = center_crop(u, n, n);
        CHECK(back.height == n);
        CHECK(back.width == n);
    }
    CHECK_THROWS(center_crop(c, 5, 5));
}

TEST_CASE("upsample and crop backward are adjoint to forward") {
    std::mt19937_64 rng(5);
    Tensor3 x(2, 3, 5);
    fill_random(x.data, rng);
    const auto y = upsample_nearest2x(x);
    Tensor3 gy(y.channels, y.height, y.width);
    fill_random(gy.data, rng);
    const auto gx = upsample_nearest2x_backward(gy, 3, 5);
    CHECK(dot(y, gy) == doctest::Approx(dot(x, gx)).epsilon(1e-12));

    const auto c = center_crop(y, 5, 7);
    Tensor3 gc(c.channels, c.height, c.width);
    fill_random(gc.data, rng);
    const auto gback = center_crop_backward(gc, y.height, y.width);
    CHECK(dot(c, gc) == doctest::Approx(dot(y, gback)).epsilon(1e-12));
}

TEST_CASE("concat_channels stacks planes") {
    Tensor3 a(1, 2, 2), b(2, 2, 2);
    a.data = {1, 2, 3, 4};
    b.data = {5, 6, 7, 8, 9, 10, 11, 12};
    const auto c = concat_channels(a, b);
    REQUIRE(c.channels == 3);
    CHECK(c.at(0, 0, 0) == 1);
    CHECK(c.at(1, 0, 0) == 5);
    CHECK(c.at(2, 1, 1) == 12);
}

TEST_CASE("network config validation") {
    NetworkConfig cfg;
    cfg.validate();
    cfg.channels = {8, 8};
    CHECK_THROWS(cfg.validate());  // depth mismatch
    cfg = NetworkConfig{};
    cfg.depth = 0;
    cfg.channels.clear();
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("skip net output contract") {
    NetworkConfig cfg;
    cfg.depth = 4;
    cfg.channels = {8, 6, 6, 8};
    cfg.seed = 11;
    SkipNet net(cfg, 3);

    Tensor3 z(3, 12, 12);
    std::mt19937_64 rng(2);
    fill_random(z.data, rng);
    const auto y = net.forward(z);
    CHECK(y.channels == 1);
    CHECK(y.height == 12);
    CHECK(y.width == 12);

    // zeroed parameters produce a zero output
    for (auto* p : net.params())
        for (double& v : *p) v = 0.0;
    const auto y0 = net.forward(z);
    for (double v : y0.data) CHECK(v == 0.0);
}

TEST_CASE("skip net forward is deterministic per seed") {
    NetworkConfig cfg;
    cfg.depth = 3;
    cfg.channels = {6, 4, 6};
    cfg.seed = 3;
    SkipNet a(cfg, 2), b(cfg, 2);
    cfg.seed = 4;
    SkipNet c(cfg, 2);

    Tensor3 z(2, 8, 8);
    std::mt19937_64 rng(9);
    fill_random(z.data, rng);
    const auto ya = a.forward(z);
    const auto yb = b.forward(z);
    const auto yc = c.forward(z);
    CHECK(ya.data == yb.data);
    CHECK(ya.data != yc.data);
}

static void check_net_gradients(NetworkConfig cfg, std::size_t in_ch, std::size_t hw) {
    SkipNet net(cfg, in_ch);
    Tensor3 z(in_ch, hw, hw);
    std::mt19937_64 rng(4);
    fill_random(z.data, rng);

    const auto y = net.forward(z);
    Tensor3 g(y.channels, y.height, y.width);
    fill_random(g.data, rng);
    const auto grads = net.backward(g);

    auto params = net.params();
    REQUIRE(params.size() == grads.tensors.size());

    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto& vec = *params[t];
        const std::size_t step = std::max<std::size_t>(1, vec.size() / 9);
        for (std::size_t i = 0; i < vec.size(); i += step) {
            const double keep = vec[i];
            vec[i] = keep + h;
            const double up = dot(net.forward(z), g);
            vec[i] = keep - h;
            const double dn = dot(net.forward(z), g);
            vec[i] = keep;
            const double num = (up - dn) / (2.0 * h);
            const double rel = std::abs(num - grads.tensors[t][i]) / std::max(std::abs(num), 1.0);
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("skip net end-to-end finite differences, depth 3") {
    NetworkConfig cfg;
    cfg.depth = 3;
    cfg.channels = {4, 4, 4};
    cfg.seed = 21;
    check_net_gradients(cfg, 2, 12);
}

TEST_CASE("skip net end-to-end finite differences, depth 4 (skip branches active)") {
    NetworkConfig cfg;
    cfg.depth = 4;
    cfg.channels = {4, 4, 4, 4};
    cfg.skip_channels = 3;
    cfg.seed = 22;
    check_net_gradients(cfg, 2, 12);
}

TEST_CASE("skip net finite differences with instance norm and zero pad") {
    NetworkConfig cfg;
    cfg.depth = 4;
    cfg.channels = {4, 4, 4, 4};
    cfg.skip_channels = 2;
    cfg.instance_norm = true;
    cfg.pad = PadMode::zero;
    cfg.seed = 23;
    check_net_gradients(cfg, 2, 8);
}

TEST_CASE("backward without forward throws") {
    NetworkConfig cfg;
    cfg.depth = 3;
    cfg.channels = {4, 4, 4};
    SkipNet net(cfg, 2);
    Tensor3 g(1, 8, 8);
    CHECK_THROWS_AS(net.backward(g), std::logic_error);
}

TEST_CASE("adam first step moves by about lr against the gradient sign") {
    std::vector<double> p = {1.0, -2.0};
    std::vector<std::vector<double>*> params = {&p};
    AdamState st = make_adam_state(params, 1e-3);
    NetGradients g;
    g.tensors = {{10.0, -4.0}};
    adam_step(params, g, st);
    CHECK(st.t == 1);
    CHECK(p[0] == doctest::Approx(1.0 - 1e-3).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(-2.0 + 1e-3).epsilon(1e-6));
}

TEST_CASE("adam zero gradient leaves params unchanged") {
    std::vector<double> p = {0.5, 0.25};
    std::vector<std::vector<double>*> params = {&p};
    AdamState st = make_adam_state(params, 1e-2);
    NetGradients g;
    g.tensors = {{0.0, 0.0}};
    adam_step(params, g, st);
    CHECK(st.t == 1);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.25);
}

TEST_CASE("adam second step with opposing gradient") {
    std::vector<double> p = {0.0};
    std::vector<std::vector<double>*> params = {&p};
    const double lr = 1e-3;
    AdamState st = make_adam_state(params, lr);
    NetGradients g1, g2;
    g1.tensors = {{2.0}};
    g2.tensors = {{-2.0}};
    adam_step(params, g1, st);
    const double after1 = p[0];
    adam_step(params, g2, st);
    CHECK(st.v[0][0] > 0.0);
    CHECK(std::abs(p[0] - after1) < lr);

    // oracle: direct evaluation of the bias-corrected formulas
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double m = 0.0, v = 0.0, x = 0.0;
    for (int t = 1; t <= 2; ++t) {
        const double grad = t == 1 ? 2.0 : -2.0;
        m = b1 * m + (1 - b1) * grad;
        v = b2 * v + (1 - b2) * grad * grad;
        const double mh = m / (1 - std::pow(b1, t));
        const double vh = v / (1 - std::pow(b2, t));
        x -= lr * mh / (std::sqrt(vh) + eps);
    }
    CHECK(p[0] == doctest::Approx(x).epsilon(1e-12));
}
