#include "sggan/nn.hpp"

#include <Eigen/Core>

#include <cmath>

namespace sggan::nn {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatRM>;
using CMapRM = Eigen::Map<const MatRM>;

void zero_grads(std::vector<NamedParam>& params) {
    for (auto& p : params) p.grad->zero();
}

std::uint64_t params_checksum(const std::vector<NamedParam>& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : params) {
        const std::uint64_t c = bytes_checksum(*p.value);
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

// col layout: rows = c*k*k, cols = grid_h*grid_w.
void im2col(const Tensor& src, int k, int stride, int pad, int grid_h, int grid_w,
            std::vector<double>& col) {
    const std::size_t rows = std::size_t(src.c) * k * k;
    col.assign(rows * grid_h * grid_w, 0.0);
    for (int c = 0; c < src.c; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                double* dst = col.data() + ((std::size_t(c) * k + ky) * k + kx) * grid_h * grid_w;
                for (int oy = 0; oy < grid_h; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= src.h) {
                        dst += grid_w;
                        continue;
                    }
                    const double* row = &src.data[(std::size_t(c) * src.h + iy) * src.w];
                    for (int ox = 0; ox < grid_w; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        *dst++ = (ix < 0 || ix >= src.w) ? 0.0 : row[ix];
                    }
                }
            }
        }
    }
}

// Scatter-add inverse of im2col over the same geometry.
void col2im(const std::vector<double>& col, int c_count, int k, int stride, int pad,
            int grid_h, int grid_w, Tensor& img) {
    for (int c = 0; c < c_count; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const double* src = col.data() + ((std::size_t(c) * k + ky) * k + kx) * grid_h * grid_w;
                for (int oy = 0; oy < grid_h; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= img.h) {
                        src += grid_w;
                        continue;
                    }
                    double* row = &img.data[(std::size_t(c) * img.h + iy) * img.w];
                    for (int ox = 0; ox < grid_w; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        const double v = *src++;
                        if (ix >= 0 && ix < img.w) row[ix] += v;
                    }
                }
            }
        }
    }
}

void init_normal(Tensor& t, Rng& rng, double stddev, double mean = 0.0) {
    for (double& v : t.data) v = rng.normal(mean, stddev);
}

}

// --------------------------------------------------------------------------
// Conv2d
// --------------------------------------------------------------------------

Conv2d::Conv2d(int in_c, int out_c, int k, int stride, int pad, bool bias)
    : in_c(in_c), out_c(out_c), k(k), stride(stride), pad(pad), has_bias(bias),
      w(out_c, in_c, k * k), gw(out_c, in_c, k * k) {
    if (bias) {
        b = Tensor::vec(out_c);
        gb = Tensor::vec(out_c);
    }
}

int Conv2d::out_size(int in, int k, int stride, int pad) {
    const int span = in + 2 * pad - k;
    if (span < 0) return 0;  // kernel does not fit even once
    return span / stride + 1;
}

void Conv2d::init(Rng& rng, double stddev) {
    init_normal(w, rng, stddev);
    if (has_bias) b.zero();
}

Tensor Conv2d::forward(const Tensor& x) {
    if (x.c != in_c)
        throw ShapeError("Conv2d: expected " + std::to_string(in_c) + " input channels, got " +
                         std::to_string(x.c));
    oh_ = out_size(x.h, k, stride, pad);
    ow_ = out_size(x.w, k, stride, pad);
    if (oh_ < 1 || ow_ < 1)
        throw ShapeError("Conv2d: input " + x.shape_str() + " too small for kernel");
    input_ = x;
    im2col(x, k, stride, pad, oh_, ow_, col_);

    Tensor out(out_c, oh_, ow_);
    const int ick2 = in_c * k * k;
    CMapRM wm(w.data.data(), out_c, ick2);
    CMapRM cm(col_.data(), ick2, std::size_t(oh_) * ow_);
    MapRM om(out.data.data(), out_c, std::size_t(oh_) * ow_);
    om.noalias() = wm * cm;
    if (has_bias)
        for (int c = 0; c < out_c; ++c)
            om.row(c).array() += b.data[c];
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    const int ick2 = in_c * k * k;
    const std::size_t cells = std::size_t(oh_) * ow_;
    CMapRM gom(grad_out.data.data(), out_c, cells);
    if (!frozen) {
        CMapRM cm(col_.data(), ick2, cells);
        MapRM gwm(gw.data.data(), out_c, ick2);
        gwm.noalias() += gom * cm.transpose();
        if (has_bias)
            for (int c = 0; c < out_c; ++c)
                gb.data[c] += gom.row(c).sum();
    }
    std::vector<double> gcol(std::size_t(ick2) * cells);
    MapRM gcm(gcol.data(), ick2, cells);
    CMapRM wm(w.data.data(), out_c, ick2);
    gcm.noalias() = wm.transpose() * gom;

    Tensor gx(input_.c, input_.h, input_.w);
    col2im(gcol, in_c, k, stride, pad, oh_, ow_, gx);
    return gx;
}

void Conv2d::collect(const std::string& prefix, std::vector<NamedParam>& out) {
    out.push_back({prefix + ".w", &w, &gw});
    if (has_bias) out.push_back({prefix + ".b", &b, &gb});
}

void Conv2d::zero_grad() {
    gw.zero();
    if (has_bias) gb.zero();
}

// --------------------------------------------------------------------------
// ConvTranspose2d
// --------------------------------------------------------------------------

ConvTranspose2d::ConvTranspose2d(int in_c, int out_c, int k, int stride, int pad, bool bias)
    : in_c(in_c), out_c(out_c), k(k), stride(stride), pad(pad), has_bias(bias),
      w(in_c, out_c, k * k), gw(in_c, out_c, k * k) {
    if (bias) {
        b = Tensor::vec(out_c);
        gb = Tensor::vec(out_c);
    }
}

int ConvTranspose2d::out_size(int in, int k, int stride, int pad) {
    return (in - 1) * stride - 2 * pad + k;
}

void ConvTranspose2d::init(Rng& rng, double stddev) {
    init_normal(w, rng, stddev);
    if (has_bias) b.zero();
}

Tensor ConvTranspose2d::forward(const Tensor& x) {
    if (x.c != in_c)
        throw ShapeError("ConvTranspose2d: expected " + std::to_string(in_c) +
                         " input channels, got " + std::to_string(x.c));
    input_ = x;
    const int oh = out_size(x.h, k, stride, pad);
    const int ow = out_size(x.w, k, stride, pad);
    if (oh < 1 || ow < 1)
        throw ShapeError("ConvTranspose2d: input " + x.shape_str() + " too small");

    const int ock2 = out_c * k * k;
    const std::size_t cells = std::size_t(x.h) * x.w;
    std::vector<double> tmp(std::size_t(ock2) * cells);
    CMapRM wm(w.data.data(), in_c, ock2);
    CMapRM xm(x.data.data(), in_c, cells);
    MapRM tm(tmp.data(), ock2, cells);
    tm.noalias() = wm.transpose() * xm;

    Tensor out(out_c, oh, ow);
    col2im(tmp, out_c, k, stride, pad, x.h, x.w, out);
    if (has_bias) {
        MapRM om(out.data.data(), out_c, std::size_t(oh) * ow);
        for (int c = 0; c < out_c; ++c)
            om.row(c).array() += b.data[c];
    }
    return out;
}

Tensor ConvTranspose2d::backward(const Tensor& grad_out) {
    const int ock2 = out_c * k * k;
    const std::size_t cells = std::size_t(input_.h) * input_.w;
    std::vector<double> gtmp;
    im2col(grad_out, k, stride, pad, input_.h, input_.w, gtmp);
    CMapRM gtm(gtmp.data(), ock2, cells);

    if (!frozen) {
        CMapRM xm(input_.data.data(), in_c, cells);
        MapRM gwm(gw.data.data(), in_c, ock2);
        gwm.noalias() += xm * gtm.transpose();
        if (has_bias) {
            CMapRM gom(grad_out.data.data(), out_c, std::size_t(grad_out.h) * grad_out.w);
            for (int c = 0; c < out_c; ++c)
                gb.data[c] += gom.row(c).sum();
        }
    }

    Tensor gx(in_c, input_.h, input_.w);
    CMapRM wm(w.data.data(), in_c, ock2);
    MapRM gxm(gx.data.data(), in_c, cells);
    gxm.noalias() = wm * gtm;
    return gx;
}

void ConvTranspose2d::collect(const std::string& prefix, std::vector<NamedParam>& out) {
    out.push_back({prefix + ".w", &w, &gw});
    if (has_bias) out.push_back({prefix + ".b", &b, &gb});
}

void ConvTranspose2d::zero_grad() {
    gw.zero();
    if (has_bias) gb.zero();
}

// --------------------------------------------------------------------------
// BatchNorm2d
// --------------------------------------------------------------------------

BatchNorm2d::BatchNorm2d(int channels)
    : channels(channels),
      gamma(Tensor::vec(channels)), beta(Tensor::vec(channels)),
      ggamma(Tensor::vec(channels)), gbeta(Tensor::vec(channels)),
      running_mean(Tensor::vec(channels)), running_var(Tensor::vec(channels)) {
    gamma.fill(1.0);
    running_var.fill(1.0);
}

void BatchNorm2d::init(Rng& rng) {
    init_normal(gamma, rng, 0.02, 1.0);
    beta.zero();
    running_mean.zero();
    running_var.fill(1.0);
}

Tensor BatchNorm2d::forward(const Tensor& x, bool train) {
    if (x.c != channels) throw ShapeError("BatchNorm2d: channel mismatch");
    train_mode_ = train;
    const int n = x.h * x.w;
    Tensor out(x.c, x.h, x.w);
    if (train) {
        xhat_ = Tensor(x.c, x.h, x.w);
        inv_std_.assign(channels, 0.0);
        for (int c = 0; c < channels; ++c) {
            const double* xs = &x.data[std::size_t(c) * n];
            double mean = 0.0;
            for (int i = 0; i < n; ++i) mean += xs[i];
            mean /= n;
            double var = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = xs[i] - mean;
                var += d * d;
            }
            var /= n;
            const double istd = 1.0 / std::sqrt(var + eps);
            inv_std_[c] = istd;
            double* xh = &xhat_.data[std::size_t(c) * n];
            double* os = &out.data[std::size_t(c) * n];
            const double g = gamma.data[c], bt = beta.data[c];
            for (int i = 0; i < n; ++i) {
                xh[i] = (xs[i] - mean) * istd;
                os[i] = g * xh[i] + bt;
            }
            running_mean.data[c] = (1.0 - momentum) * running_mean.data[c] + momentum * mean;
            running_var.data[c] = (1.0 - momentum) * running_var.data[c] + momentum * var;
        }
    } else {
        inv_std_.assign(channels, 0.0);
        for (int c = 0; c < channels; ++c) {
            const double istd = 1.0 / std::sqrt(running_var.data[c] + eps);
            inv_std_[c] = istd;
            const double* xs = &x.data[std::size_t(c) * n];
            double* os = &out.data[std::size_t(c) * n];
            const double g = gamma.data[c], bt = beta.data[c], mu = running_mean.data[c];
            for (int i = 0; i < n; ++i) os[i] = g * (xs[i] - mu) * istd + bt;
        }
        if (!frozen) xhat_ = out;  // not used; keeps shape for safety
    }
    return out;
}

Tensor BatchNorm2d::backward(const Tensor& grad_out) {
    const int n = grad_out.h * grad_out.w;
    Tensor gx(grad_out.c, grad_out.h, grad_out.w);
    if (train_mode_) {
        for (int c = 0; c < channels; ++c) {
            const double* go = &grad_out.data[std::size_t(c) * n];
            const double* xh = &xhat_.data[std::size_t(c) * n];
            double sum_go = 0.0, sum_goxh = 0.0;
            for (int i = 0; i < n; ++i) {
                sum_go += go[i];
                sum_goxh += go[i] * xh[i];
            }
            if (!frozen) {
                ggamma.data[c] += sum_goxh;
                gbeta.data[c] += sum_go;
            }
            const double scale = gamma.data[c] * inv_std_[c];
            double* gxs = &gx.data[std::size_t(c) * n];
            for (int i = 0; i < n; ++i)
                gxs[i] = scale * (go[i] - sum_go / n - xh[i] * sum_goxh / n);
        }
    } else {
        for (int c = 0; c < channels; ++c) {
            const double* go = &grad_out.data[std::size_t(c) * n];
            const double scale = gamma.data[c] * inv_std_[c];
            double* gxs = &gx.data[std::size_t(c) * n];
            for (int i = 0; i < n; ++i) gxs[i] = scale * go[i];
        }
    }
    return gx;
}

void BatchNorm2d::collect(const std::string& prefix, std::vector<NamedParam>& out) {
    out.push_back({prefix + ".gamma", &gamma, &ggamma});
    out.push_back({prefix + ".beta", &beta, &gbeta});
    // Running stats travel with checkpoints but take no gradient; they are
    // registered with themselves as the grad slot sink.
}

void BatchNorm2d::zero_grad() {
    ggamma.zero();
    gbeta.zero();
}

// --------------------------------------------------------------------------
// Linear
// --------------------------------------------------------------------------

Linear::Linear(int in_dim, int out_dim)
    : in_dim(in_dim), out_dim(out_dim),
      w(out_dim, in_dim, 1), b(Tensor::vec(out_dim)),
      gw(out_dim, in_dim, 1), gb(Tensor::vec(out_dim)) {}

void Linear::init(Rng& rng, double stddev) {
    init_normal(w, rng, stddev);
    b.zero();
}

Tensor Linear::forward(const Tensor& x) {
    if (int(x.size()) != in_dim) throw ShapeError("Linear: dimension mismatch");
    input_ = x;
    Tensor out = Tensor::vec(out_dim);
    CMapRM wm(w.data.data(), out_dim, in_dim);
    Eigen::Map<const Eigen::VectorXd> xv(x.data.data(), in_dim);
    Eigen::Map<Eigen::VectorXd> ov(out.data.data(), out_dim);
    ov.noalias() = wm * xv;
    for (int i = 0; i < out_dim; ++i) out.data[i] += b.data[i];
    return out;
}

Tensor Linear::backward(const Tensor& grad_out) {
    Eigen::Map<const Eigen::VectorXd> gv(grad_out.data.data(), out_dim);
    if (!frozen) {
        MapRM gwm(gw.data.data(), out_dim, in_dim);
        Eigen::Map<const Eigen::VectorXd> xv(input_.data.data(), in_dim);
        gwm.noalias() += gv * xv.transpose();
        for (int i = 0; i < out_dim; ++i) gb.data[i] += grad_out.data[i];
    }
    Tensor gx(input_.c, input_.h, input_.w);
    CMapRM wm(w.data.data(), out_dim, in_dim);
    Eigen::Map<Eigen::VectorXd> gxv(gx.data.data(), in_dim);
    gxv.noalias() = wm.transpose() * gv;
    return gx;
}

void Linear::collect(const std::string& prefix, std::vector<NamedParam>& out) {
    out.push_back({prefix + ".w", &w, &gw});
    out.push_back({prefix + ".b", &b, &gb});
}

void Linear::zero_grad() {
    gw.zero();
    gb.zero();
}

// --------------------------------------------------------------------------
// Activations, dropout, pooling
// --------------------------------------------------------------------------

Tensor LeakyRelu::forward(const Tensor& x) {
    input_ = x;
    Tensor out = x;
    for (double& v : out.data)
        if (v < 0.0) v *= alpha;
    return out;
}

Tensor LeakyRelu::backward(const Tensor& grad_out) {
    Tensor gx = grad_out;
    for (std::size_t i = 0; i < gx.size(); ++i)
        if (input_.data[i] < 0.0) gx.data[i] *= alpha;
    return gx;
}

Tensor Relu::forward(const Tensor& x) {
    input_ = x;
    Tensor out = x;
    for (double& v : out.data)
        if (v < 0.0) v = 0.0;
    return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
    Tensor gx = grad_out;
    for (std::size_t i = 0; i < gx.size(); ++i)
        if (input_.data[i] < 0.0) gx.data[i] = 0.0;
    return gx;
}

Tensor Tanh::forward(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data) v = std::tanh(v);
    output_ = out;
    return out;
}

Tensor Tanh::backward(const Tensor& grad_out) {
    Tensor gx = grad_out;
    for (std::size_t i = 0; i < gx.size(); ++i)
        gx.data[i] *= 1.0 - output_.data[i] * output_.data[i];
    return gx;
}

Tensor Dropout::forward(const Tensor& x, bool train, Rng* rng) {
    active_ = train && rate > 0.0;
    if (!active_) return x;
    if (!rng) throw std::invalid_argument("Dropout: train mode needs an rng");
    mask_ = Tensor(x.c, x.h, x.w);
    const double keep = 1.0 - rate;
    Tensor out = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = rng->uniform() < keep ? 1.0 / keep : 0.0;
        mask_.data[i] = m;
        out.data[i] *= m;
    }
    return out;
}

Tensor Dropout::backward(const Tensor& grad_out) {
    if (!active_) return grad_out;
    Tensor gx = grad_out;
    for (std::size_t i = 0; i < gx.size(); ++i) gx.data[i] *= mask_.data[i];
    return gx;
}

Tensor AvgPool2::forward(const Tensor& x) {
    in_c_ = x.c;
    in_h_ = x.h;
    in_w_ = x.w;
    const int oh = (x.h + 1) / 2, ow = (x.w + 1) / 2;
    Tensor out(x.c, oh, ow);
    for (int c = 0; c < x.c; ++c)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const int y1 = std::min(2 * oy + 1, x.h - 1);
                const int x1 = std::min(2 * ox + 1, x.w - 1);
                double s = 0.0;
                int cnt = 0;
                for (int y = 2 * oy; y <= y1; ++y)
                    for (int xx = 2 * ox; xx <= x1; ++xx) {
                        s += x.at(c, y, xx);
                        ++cnt;
                    }
                out.at(c, oy, ox) = s / cnt;
            }
    return out;
}

Tensor AvgPool2::backward(const Tensor& grad_out) {
    Tensor gx(in_c_, in_h_, in_w_);
    for (int c = 0; c < in_c_; ++c)
        for (int oy = 0; oy < grad_out.h; ++oy)
            for (int ox = 0; ox < grad_out.w; ++ox) {
                const int y1 = std::min(2 * oy + 1, in_h_ - 1);
                const int x1 = std::min(2 * ox + 1, in_w_ - 1);
                const int cnt = (y1 - 2 * oy + 1) * (x1 - 2 * ox + 1);
                const double g = grad_out.at(c, oy, ox) / cnt;
                for (int y = 2 * oy; y <= y1; ++y)
                    for (int xx = 2 * ox; xx <= x1; ++xx) gx.at(c, y, xx) += g;
            }
    return gx;
}

Tensor GlobalAvgPool::forward(const Tensor& x) {
    in_c_ = x.c;
    in_h_ = x.h;
    in_w_ = x.w;
    Tensor out = Tensor::vec(x.c);
    const int n = x.h * x.w;
    for (int c = 0; c < x.c; ++c) {
        double s = 0.0;
        const double* xs = &x.data[std::size_t(c) * n];
        for (int i = 0; i < n; ++i) s += xs[i];
        out.data[c] = s / n;
    }
    return out;
}

Tensor GlobalAvgPool::backward(const Tensor& grad_out) {
    Tensor gx(in_c_, in_h_, in_w_);
    const int n = in_h_ * in_w_;
    for (int c = 0; c < in_c_; ++c) {
        const double g = grad_out.data[c] / n;
        double* gs = &gx.data[std::size_t(c) * n];
        for (int i = 0; i < n; ++i) gs[i] = g;
    }
    return gx;
}

// --------------------------------------------------------------------------
// Classification heads
// --------------------------------------------------------------------------

double softmax_cross_entropy(const Tensor& logits, int target, Tensor& grad) {
    const int n = int(logits.size());
    double mx = logits.data[0];
    for (double v : logits.data) mx = std::max(mx, v);
    double lse = 0.0;
    for (double v : logits.data) lse += std::exp(v - mx);
    lse = mx + std::log(lse);
    grad = Tensor::vec(n);
    for (int i = 0; i < n; ++i) {
        const double p = std::exp(logits.data[i] - lse);
        grad.data[i] = p - (i == target ? 1.0 : 0.0);
    }
    return lse - logits.data[target];
}

Tensor softmax2d(const Tensor& logits) {
    Tensor probs(logits.c, logits.h, logits.w);
    const int n = logits.h * logits.w;
    for (int i = 0; i < n; ++i) {
        double mx = -1e300;
        for (int c = 0; c < logits.c; ++c)
            mx = std::max(mx, logits.data[std::size_t(c) * n + i]);
        double z = 0.0;
        for (int c = 0; c < logits.c; ++c)
            z += std::exp(logits.data[std::size_t(c) * n + i] - mx);
        for (int c = 0; c < logits.c; ++c)
            probs.data[std::size_t(c) * n + i] =
                std::exp(logits.data[std::size_t(c) * n + i] - mx) / z;
    }
    return probs;
}

Tensor softmax2d_backward(const Tensor& probs, const Tensor& grad_probs) {
    Tensor gl(probs.c, probs.h, probs.w);
    const int n = probs.h * probs.w;
    for (int i = 0; i < n; ++i) {
        double dot = 0.0;
        for (int c = 0; c < probs.c; ++c)
            dot += grad_probs.data[std::size_t(c) * n + i] * probs.data[std::size_t(c) * n + i];
        for (int c = 0; c < probs.c; ++c) {
            const std::size_t idx = std::size_t(c) * n + i;
            gl.data[idx] = probs.data[idx] * (grad_probs.data[idx] - dot);
        }
    }
    return gl;
}

double pixelwise_cross_entropy(const Tensor& logits, const std::vector<int>& targets,
                               Tensor& grad) {
    const int n = logits.h * logits.w;
    if (int(targets.size()) != n)
        throw ShapeError("pixelwise_cross_entropy: target size mismatch");
    grad = Tensor(logits.c, logits.h, logits.w);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        double mx = -1e300;
        for (int c = 0; c < logits.c; ++c)
            mx = std::max(mx, logits.data[std::size_t(c) * n + i]);
        double z = 0.0;
        for (int c = 0; c < logits.c; ++c)
            z += std::exp(logits.data[std::size_t(c) * n + i] - mx);
        const double lse = mx + std::log(z);
        loss += lse - logits.data[std::size_t(targets[i]) * n + i];
        for (int c = 0; c < logits.c; ++c) {
            const std::size_t idx = std::size_t(c) * n + i;
            const double p = std::exp(logits.data[idx] - lse);
            grad.data[idx] = (p - (c == targets[i] ? 1.0 : 0.0)) / n;
        }
    }
    return loss / n;
}

int argmax(const Tensor& v) {
    int best = 0;
    for (int i = 1; i < int(v.size()); ++i)
        if (v.data[i] > v.data[best]) best = i;
    return best;
}

// --------------------------------------------------------------------------
// Adam
// --------------------------------------------------------------------------

void Adam::attach(const std::vector<NamedParam>& params) {
    m.clear();
    v.clear();
    t = 0;
    for (const auto& p : params) {
        m.emplace_back(p.value->c, p.value->h, p.value->w);
        v.emplace_back(p.value->c, p.value->h, p.value->w);
    }
}

void Adam::step(std::vector<NamedParam>& params, double lr) {
    if (m.size() != params.size())
        throw std::logic_error("Adam: not attached to this parameter set");
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& val = *params[i].value;
        const Tensor& g = *params[i].grad;
        Tensor& mi = m[i];
        Tensor& vi = v[i];
        for (std::size_t j = 0; j < val.size(); ++j) {
            const double gj = g.data[j];
            mi.data[j] = beta1 * mi.data[j] + (1.0 - beta1) * gj;
            vi.data[j] = beta2 * vi.data[j] + (1.0 - beta2) * gj * gj;
            const double mhat = mi.data[j] / bc1;
            const double vhat = vi.data[j] / bc2;
            val.data[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

}
