#ifndef SGGAN_NN_HPP
#define SGGAN_NN_HPP

#include <optional>
#include <string>
#include <vector>

#include "sggan/rng.hpp"
#include "sggan/tensor.hpp"

namespace sggan::nn {

struct NamedParam {
    std::string name;
    Tensor* value;
    Tensor* grad;
};

void zero_grads(std::vector<NamedParam>& params);
std::uint64_t params_checksum(const std::vector<NamedParam>& params);

// ---------------------------------------------------------------------------
// Layers. Each caches what its backward pass needs during forward, so a layer
// instance handles one forward/backward pair at a time. When `frozen` is set,
// backward still propagates input gradients but skips parameter gradients.
// ---------------------------------------------------------------------------

class Conv2d {
public:
    Conv2d() = default;
    Conv2d(int in_c, int out_c, int k, int stride, int pad, bool bias);

    void init(Rng& rng, double stddev = 0.02);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);
    void collect(const std::string& prefix, std::vector<NamedParam>& out);
    void zero_grad();

    static int out_size(int in, int k, int stride, int pad);

    int in_c = 0, out_c = 0, k = 0, stride = 1, pad = 0;
    bool has_bias = true;
    bool frozen = false;
    Tensor w, b, gw, gb;  // w is (out_c, in_c, k*k)

private:
    Tensor input_;
    std::vector<double> col_;
    int oh_ = 0, ow_ = 0;
};

class ConvTranspose2d {
public:
    ConvTranspose2d() = default;
    ConvTranspose2d(int in_c, int out_c, int k, int stride, int pad, bool bias);

    void init(Rng& rng, double stddev = 0.02);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);
    void collect(const std::string& prefix, std::vector<NamedParam>& out);
    void zero_grad();

    static int out_size(int in, int k, int stride, int pad);

    int in_c = 0, out_c = 0, k = 0, stride = 1, pad = 0;
    bool has_bias = true;
    bool frozen = false;
    Tensor w, b, gw, gb;  // w is (in_c, out_c, k*k)

private:
    Tensor input_;
};

// Normalizes each channel over its spatial extent of the sample at hand
// (batch of one), tracking running statistics for eval mode.
class BatchNorm2d {
public:
    BatchNorm2d() = default;
    explicit BatchNorm2d(int channels);

    void init(Rng& rng);
    Tensor forward(const Tensor& x, bool train);
    Tensor backward(const Tensor& grad_out);
    void collect(const std::string& prefix, std::vector<NamedParam>& out);
    void zero_grad();

    int channels = 0;
    double eps = 1e-5;
    double momentum = 0.1;
    bool frozen = false;
    Tensor gamma, beta, ggamma, gbeta;
    Tensor running_mean, running_var;  // biased variance

private:
    Tensor xhat_;
    std::vector<double> inv_std_;
    bool train_mode_ = false;
};

class Linear {
public:
    Linear() = default;
    Linear(int in_dim, int out_dim);

    void init(Rng& rng, double stddev = 0.02);
    Tensor forward(const Tensor& x);  // x is (in,1,1)
    Tensor backward(const Tensor& grad_out);
    void collect(const std::string& prefix, std::vector<NamedParam>& out);
    void zero_grad();

    int in_dim = 0, out_dim = 0;
    bool frozen = false;
    Tensor w, b, gw, gb;  // w is (out, in, 1)

private:
    Tensor input_;
};

class LeakyRelu {
public:
    explicit LeakyRelu(double alpha = 0.2) : alpha(alpha) {}
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);
    double alpha;

private:
    Tensor input_;
};

class Relu {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    Tensor input_;
};

class Tanh {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    Tensor output_;
};

// Inverted dropout: kept activations are scaled by 1/(1-rate) at train time,
// eval is the identity.
class Dropout {
public:
    explicit Dropout(double rate = 0.5) : rate(rate) {}
    Tensor forward(const Tensor& x, bool train, Rng* rng);
    Tensor backward(const Tensor& grad_out);
    double rate;

private:
    Tensor mask_;
    bool active_ = false;
};

// 2x2 average pooling with ceil semantics: odd extents keep their last
// row/column as a smaller window, and a 1x1 input passes through unchanged.
class AvgPool2 {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

private:
    int in_h_ = 0, in_w_ = 0, in_c_ = 0;
};

class GlobalAvgPool {
public:
    Tensor forward(const Tensor& x);  // -> (c,1,1)
    Tensor backward(const Tensor& grad_out);

private:
    int in_h_ = 0, in_w_ = 0, in_c_ = 0;
};

// ---------------------------------------------------------------------------
// Classification heads.
// ---------------------------------------------------------------------------

// Numerically stable log-softmax cross entropy for a (n,1,1) logit vector.
// Returns the loss; grad receives dloss/dlogits.
double softmax_cross_entropy(const Tensor& logits, int target, Tensor& grad);

// Per-pixel softmax over channels of (c,h,w) logits.
Tensor softmax2d(const Tensor& logits);
// Gradient through softmax2d given dloss/dprobs and the probs it produced.
Tensor softmax2d_backward(const Tensor& probs, const Tensor& grad_probs);

// Mean pixelwise cross entropy against integer class targets (size h*w).
// grad receives dloss/dlogits.
double pixelwise_cross_entropy(const Tensor& logits, const std::vector<int>& targets,
                               Tensor& grad);

int argmax(const Tensor& v);

// ---------------------------------------------------------------------------
// Adam with per-parameter first/second moment estimates.
// ---------------------------------------------------------------------------

class Adam {
public:
    Adam() = default;
    Adam(double beta1, double beta2, double eps = 1e-8)
        : beta1(beta1), beta2(beta2), eps(eps) {}

    void attach(const std::vector<NamedParam>& params);
    void step(std::vector<NamedParam>& params, double lr);

    double beta1 = 0.5, beta2 = 0.999, eps = 1e-8;
    int t = 0;
    std::vector<Tensor> m, v;
};

}

#endif
