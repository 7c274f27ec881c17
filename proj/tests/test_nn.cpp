#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sggan/nn.hpp"
#include "sggan/rng.hpp"

#include "gradcheck.hpp"

#include <cmath>

using namespace sggan;
using namespace sggan::nn;
using sggan::testutil::compare_grads;
using sggan::testutil::fill_away_from_zero;
using sggan::testutil::numeric_grad;

namespace {

// Scalarize a layer: L = sum(forward(x) .* r) for a fixed projection r.
// Returns analytic input grad; parameter grads accumulate inside the layer.
template <typename Layer>
Tensor project_backward(Layer& layer, const Tensor& x, const Tensor& r) {
    return layer.backward(r);
}

Tensor random_like(const Tensor& t, Rng& rng) {
    Tensor r(t.c, t.h, t.w);
    for (double& v : r.data) v = rng.uniform(-1.0, 1.0);
    return r;
}

}

TEST_CASE("conv2d output geometry") {
    CHECK(Conv2d::out_size(256, 4, 2, 1) == 128);
    CHECK(Conv2d::out_size(7, 4, 2, 1) == 3);
    CHECK(Conv2d::out_size(30, 4, 1, 1) == 29);
    CHECK(ConvTranspose2d::out_size(128, 4, 2, 1) == 256);
    CHECK(ConvTranspose2d::out_size(1, 4, 2, 1) == 2);
}

TEST_CASE("conv2d forward matches a hand-computed case") {
    // 1 input channel, 1 output channel, k2 s1 p0 on a 2x2 input:
    // plain dot product of kernel and image.
    Conv2d conv(1, 1, 2, 1, 0, true);
    conv.w.data = {1.0, 2.0, 3.0, 4.0};
    conv.b.data = {0.5};
    Tensor x(1, 2, 2);
    x.data = {1.0, -1.0, 2.0, 0.5};
    const Tensor y = conv.forward(x);
    CHECK(y.c == 1);
    CHECK(y.h == 1);
    CHECK(y.w == 1);
    CHECK(y.data[0] == doctest::Approx(1 - 2 + 6 + 2 + 0.5));
}

TEST_CASE("conv2d gradients (stride 2)") {
    Rng rng(101);
    Conv2d conv(3, 2, 4, 2, 1, true);
    conv.init(rng, 0.2);
    Tensor x(3, 6, 5);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(conv.forward(x), rng);

    conv.zero_grad();
    conv.forward(x);
    const Tensor gx = conv.backward(r);

    auto loss = [&] {
        const Tensor y = conv.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
    CHECK(compare_grads(conv.gw, numeric_grad(conv.w, loss)).ok);
    CHECK(compare_grads(conv.gb, numeric_grad(conv.b, loss)).ok);
}

TEST_CASE("conv2d gradients (stride 1, no bias)") {
    Rng rng(102);
    Conv2d conv(2, 3, 4, 1, 1, false);
    conv.init(rng, 0.2);
    Tensor x(2, 5, 5);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(conv.forward(x), rng);

    conv.zero_grad();
    conv.forward(x);
    const Tensor gx = conv.backward(r);

    auto loss = [&] {
        const Tensor y = conv.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
    CHECK(compare_grads(conv.gw, numeric_grad(conv.w, loss)).ok);
}

TEST_CASE("conv2d rejects an input below the kernel footprint") {
    Conv2d conv(1, 1, 4, 2, 1, false);
    Tensor tiny(1, 1, 1);
    CHECK_THROWS_AS(conv.forward(tiny), ShapeError);
}

TEST_CASE("conv_transpose2d gradients") {
    Rng rng(103);
    ConvTranspose2d deconv(3, 2, 4, 2, 1, true);
    deconv.init(rng, 0.2);
    Tensor x(3, 3, 4);
    fill_away_from_zero(x, rng);
    const Tensor y0 = deconv.forward(x);
    CHECK(y0.h == 6);
    CHECK(y0.w == 8);
    Tensor r = random_like(y0, rng);

    deconv.zero_grad();
    deconv.forward(x);
    const Tensor gx = deconv.backward(r);

    auto loss = [&] {
        const Tensor y = deconv.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
    CHECK(compare_grads(deconv.gw, numeric_grad(deconv.w, loss)).ok);
    CHECK(compare_grads(deconv.gb, numeric_grad(deconv.b, loss)).ok);
}

TEST_CASE("conv_transpose2d inverts conv2d geometry") {
    Rng rng(104);
    ConvTranspose2d deconv(4, 2, 4, 2, 1, false);
    deconv.init(rng, 0.2);
    Tensor x(4, 8, 8);
    fill_away_from_zero(x, rng);
    const Tensor y = deconv.forward(x);
    CHECK(y.c == 2);
    CHECK(y.h == 16);
    CHECK(y.w == 16);
}

TEST_CASE("batchnorm train mode normalizes each channel") {
    Rng rng(105);
    BatchNorm2d bn(3);
    Tensor x(3, 4, 4);
    fill_away_from_zero(x, rng);
    const Tensor y = bn.forward(x, true);
    const int n = 16;
    for (int c = 0; c < 3; ++c) {
        double mean = 0.0, var = 0.0;
        for (int i = 0; i < n; ++i) mean += y.data[c * n + i];
        mean /= n;
        for (int i = 0; i < n; ++i) {
            const double d = y.data[c * n + i] - mean;
            var += d * d;
        }
        var /= n;
        CHECK(mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(var == doctest::Approx(1.0).epsilon(1e-3));  // eps shrinks it slightly
    }
}

TEST_CASE("batchnorm gradients") {
    Rng rng(106);
    BatchNorm2d bn(2);
    bn.init(rng);
    Tensor x(2, 3, 3);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(x, rng);

    bn.zero_grad();
    bn.forward(x, true);
    const Tensor gx = bn.backward(r);

    auto loss = [&] {
        const Tensor y = bn.forward(x, true);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss), 1e-4, 1e-5).ok);
    CHECK(compare_grads(bn.ggamma, numeric_grad(bn.gamma, loss)).ok);
    CHECK(compare_grads(bn.gbeta, numeric_grad(bn.beta, loss)).ok);
}

TEST_CASE("batchnorm eval mode uses running statistics") {
    BatchNorm2d bn(1);
    bn.running_mean.data[0] = 2.0;
    bn.running_var.data[0] = 4.0;
    bn.gamma.data[0] = 3.0;
    bn.beta.data[0] = 1.0;
    Tensor x(1, 1, 2);
    x.data = {2.0, 4.0};
    const Tensor y = bn.forward(x, false);
    CHECK(y.data[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(y.data[1] == doctest::Approx(1.0 + 3.0 * 2.0 / 2.0).epsilon(1e-5));
}

TEST_CASE("batchnorm running stats update with momentum") {
    BatchNorm2d bn(1);
    Tensor x(1, 1, 4);
    x.data = {1.0, 3.0, 1.0, 3.0};  // mean 2, biased var 1
    bn.forward(x, true);
    CHECK(bn.running_mean.data[0] == doctest::Approx(0.1 * 2.0));
    CHECK(bn.running_var.data[0] == doctest::Approx(0.9 * 1.0 + 0.1 * 1.0));
}

TEST_CASE("linear gradients") {
    Rng rng(107);
    Linear lin(6, 4);
    lin.init(rng, 0.3);
    Tensor x = Tensor::vec(6);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(lin.forward(x), rng);

    lin.zero_grad();
    lin.forward(x);
    const Tensor gx = lin.backward(r);

    auto loss = [&] {
        const Tensor y = lin.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
    CHECK(compare_grads(lin.gw, numeric_grad(lin.w, loss)).ok);
    CHECK(compare_grads(lin.gb, numeric_grad(lin.b, loss)).ok);
}

TEST_CASE("activation gradients") {
    Rng rng(108);
    Tensor x(2, 3, 3);
    fill_away_from_zero(x, rng);

    LeakyRelu lrelu(0.2);
    Relu relu;
    Tanh tanh_l;
    Tensor r = random_like(x, rng);

    auto check_layer = [&](auto& layer) {
        layer.forward(x);
        const Tensor gx = layer.backward(r);
        auto loss = [&] {
            const Tensor y = layer.forward(x);
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
            return s;
        };
        CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
    };
    check_layer(lrelu);
    check_layer(relu);
    check_layer(tanh_l);

    // Spot values.
    Tensor probe(1, 1, 2);
    probe.data = {-1.0, 2.0};
    CHECK(lrelu.forward(probe).data[0] == doctest::Approx(-0.2));
    CHECK(relu.forward(probe).data[0] == 0.0);
    CHECK(relu.forward(probe).data[1] == 2.0);
    CHECK(tanh_l.forward(probe).data[1] == doctest::Approx(std::tanh(2.0)));
}

TEST_CASE("dropout scales kept units and is reproducible by seed") {
    Rng rng(109);
    Dropout drop(0.5);
    Tensor x(1, 8, 8);
    x.fill(1.0);

    Rng r1(55);
    const Tensor y1 = drop.forward(x, true, &r1);
    Rng r2(55);
    const Tensor y2 = drop.forward(x, true, &r2);
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1.data[i] == y2.data[i]);

    int kept = 0;
    for (double v : y2.data) {
        CHECK((v == 0.0 || v == doctest::Approx(2.0)));
        if (v != 0.0) ++kept;
    }
    CHECK(kept > 10);
    CHECK(kept < 54);

    // Backward masks exactly the dropped units.
    Tensor g(1, 8, 8);
    g.fill(1.0);
    const Tensor gx = drop.backward(g);
    for (std::size_t i = 0; i < gx.size(); ++i)
        CHECK(gx.data[i] == y2.data[i]);  // input was all ones

    // Eval mode passes through untouched.
    const Tensor ye = drop.forward(x, false, nullptr);
    for (double v : ye.data) CHECK(v == 1.0);
}

TEST_CASE("avgpool halves odd sizes with clamped windows") {
    AvgPool2 pool;
    Tensor x(1, 3, 3);
    x.data = {1, 2, 3,
              4, 5, 6,
              7, 8, 9};
    const Tensor y = pool.forward(x);
    CHECK(y.h == 2);
    CHECK(y.w == 2);
    CHECK(y.at(0, 0, 0) == doctest::Approx(3.0));    // 1,2,4,5
    CHECK(y.at(0, 0, 1) == doctest::Approx(4.5));    // 3,6
    CHECK(y.at(0, 1, 0) == doctest::Approx(7.5));    // 7,8
    CHECK(y.at(0, 1, 1) == doctest::Approx(9.0));    // 9

    // 1x1 input passes through unchanged rather than underflowing.
    Tensor one(2, 1, 1);
    one.data = {3.0, 4.0};
    const Tensor y1 = pool.forward(one);
    CHECK(y1.h == 1);
    CHECK(y1.w == 1);
    CHECK(y1.data[0] == 3.0);
    CHECK(y1.data[1] == 4.0);
}

TEST_CASE("avgpool gradients") {
    Rng rng(110);
    AvgPool2 pool;
    Tensor x(2, 5, 5);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(pool.forward(x), rng);

    pool.forward(x);
    const Tensor gx = pool.backward(r);
    auto loss = [&] {
        const Tensor y = pool.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
}

TEST_CASE("global average pool gradients") {
    Rng rng(111);
    GlobalAvgPool gap;
    Tensor x(3, 4, 4);
    fill_away_from_zero(x, rng);
    const Tensor y = gap.forward(x);
    CHECK(y.c == 3);
    CHECK(y.h == 1);
    Tensor r = random_like(y, rng);

    gap.forward(x);
    const Tensor gx = gap.backward(r);
    auto loss = [&] {
        const Tensor z = gap.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += z.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gx, numeric_grad(x, loss)).ok);
}

TEST_CASE("softmax cross entropy value and gradient") {
    Tensor logits = Tensor::vec(3);
    logits.data = {1.0, 2.0, 0.5};
    Tensor grad;
    const double loss = softmax_cross_entropy(logits, 1, grad);
    // Direct log-sum-exp evaluation.
    const double lse = std::log(std::exp(1.0) + std::exp(2.0) + std::exp(0.5));
    CHECK(loss == doctest::Approx(lse - 2.0).epsilon(1e-12));

    Tensor g2;
    auto f = [&] {
        Tensor tmp;
        return softmax_cross_entropy(logits, 1, tmp);
    };
    CHECK(compare_grads(grad, numeric_grad(logits, f)).ok);
    // Gradient sums to zero (probabilities minus one-hot).
    CHECK(sum(grad) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("softmax2d produces per-pixel distributions") {
    Rng rng(112);
    Tensor logits(4, 3, 3);
    fill_away_from_zero(logits, rng);
    const Tensor p = softmax2d(logits);
    for (int i = 0; i < 9; ++i) {
        double s = 0.0;
        for (int c = 0; c < 4; ++c) s += p.data[c * 9 + i];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Backward through the softmax.
    Tensor r = random_like(p, rng);
    const Tensor gl = softmax2d_backward(p, r);
    auto loss = [&] {
        const Tensor q = softmax2d(logits);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q.data[i] * r.data[i];
        return s;
    };
    CHECK(compare_grads(gl, numeric_grad(logits, loss)).ok);
}

TEST_CASE("pixelwise cross entropy gradient") {
    Rng rng(113);
    Tensor logits(3, 2, 2);
    fill_away_from_zero(logits, rng);
    std::vector<int> targets = {0, 2, 1, 1};
    Tensor grad;
    pixelwise_cross_entropy(logits, targets, grad);
    auto f = [&] {
        Tensor tmp;
        return pixelwise_cross_entropy(logits, targets, tmp);
    };
    CHECK(compare_grads(grad, numeric_grad(logits, f)).ok);
}

TEST_CASE("argmax picks the largest entry") {
    Tensor v = Tensor::vec(4);
    v.data = {0.1, 0.7, 0.3, 0.2};
    CHECK(argmax(v) == 1);
}

TEST_CASE("adam first step moves by roughly lr in the gradient direction") {
    Tensor p = Tensor::vec(1);
    p.data = {10.0};
    Tensor g = Tensor::vec(1);
    g.data = {4.0};
    std::vector<NamedParam> params = {{"p", &p, &g}};
    Adam opt;
    opt.attach(params);
    opt.step(params, 0.01);
    // Bias-corrected first step is lr * g / (|g| + eps') ≈ lr.
    CHECK(p.data[0] == doctest::Approx(10.0 - 0.01).epsilon(1e-4));
}

TEST_CASE("adam minimizes a quadratic") {
    Tensor p = Tensor::vec(2);
    p.data = {5.0, -3.0};
    Tensor g = Tensor::vec(2);
    std::vector<NamedParam> params = {{"p", &p, &g}};
    Adam opt;
    opt.attach(params);
    for (int i = 0; i < 2000; ++i) {
        g.data[0] = 2.0 * (p.data[0] - 1.0);
        g.data[1] = 2.0 * (p.data[1] + 2.0);
        opt.step(params, 0.05);
    }
    CHECK(p.data[0] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(p.data[1] == doctest::Approx(-2.0).epsilon(1e-2));
}

TEST_CASE("frozen layers propagate input gradients without touching weights") {
    Rng rng(114);
    Conv2d conv(2, 2, 4, 2, 1, true);
    conv.init(rng, 0.2);
    Tensor x(2, 6, 6);
    fill_away_from_zero(x, rng);
    Tensor r = random_like(conv.forward(x), rng);

    conv.zero_grad();
    conv.forward(x);
    const Tensor gx_live = conv.backward(r);
    const Tensor gw_live = conv.gw;

    conv.zero_grad();
    conv.frozen = true;
    conv.forward(x);
    const Tensor gx_frozen = conv.backward(r);
    CHECK(max_abs(conv.gw) == 0.0);
    for (std::size_t i = 0; i < gx_live.size(); ++i)
        CHECK(gx_frozen.data[i] == doctest::Approx(gx_live.data[i]).epsilon(1e-12));
    CHECK(max_abs(gw_live) > 0.0);
}

TEST_CASE("params_checksum reflects parameter content") {
    Rng rng(115);
    Conv2d conv(1, 1, 3, 1, 1, true);
    conv.init(rng, 0.2);
    std::vector<NamedParam> params;
    conv.collect("conv", params);
    const std::uint64_t before = params_checksum(params);
    conv.w.data[0] += 1.0;
    CHECK(params_checksum(params) != before);
}
