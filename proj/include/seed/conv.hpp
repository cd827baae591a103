#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seed/tensor.hpp"

namespace seed {

// 2-D convolution with zero "same" padding applied before the stride.
// Weights are [C_out][C_in][K_h][K_w]. Gradient buffers are allocated by the
// trainer and stay empty during pure inference.
template <typename T>
struct ConvLayer {
    int in_channels = 0;
    int out_channels = 0;
    int kh = 3, kw = 3;
    int stride = 1;
    std::vector<T> weights;
    std::vector<T> bias;
    // Optional per-output-channel affine applied after bias (folded batch norm).
    bool has_fused_bn = false;
    std::vector<T> fused_scale, fused_shift;

    std::vector<T> grad_weights, grad_bias;

    ConvLayer() = default;
    ConvLayer(int cin, int cout, int k, int s)
        : in_channels(cin), out_channels(cout), kh(k), kw(k), stride(s),
          weights(static_cast<std::size_t>(cout) * cin * k * k, T(0)), bias(cout, T(0)) {
        if (k % 2 == 0) throw std::invalid_argument("conv: kernel size must be odd");
        if (s < 1) throw std::invalid_argument("conv: stride must be >= 1");
    }

    int pad_h() const { return kh / 2; }
    int pad_w() const { return kw / 2; }
    int out_h(int in_h) const { return (in_h + 2 * pad_h() - kh) / stride + 1; }
    int out_w(int in_w) const { return (in_w + 2 * pad_w() - kw) / stride + 1; }

    T wgt(int co, int ci, int ky, int kx) const {
        return weights[((static_cast<std::size_t>(co) * in_channels + ci) * kh + ky) * kw + kx];
    }

    void alloc_grads() {
        grad_weights.assign(weights.size(), T(0));
        grad_bias.assign(bias.size(), T(0));
    }
};

template <typename T>
struct ConvResult {
    Tensor3<T> pre_act;
    std::uint64_t synops = 0;
};

// Event-driven convolution: visits only the nonzero input entries and stamps
// the kernel onto the output. synops counts the multiplications actually
// needed (valid kernel taps per event times C_out, boundary-exact).
template <typename T>
ConvResult<T> sparse_conv(const SparseMap<T>& input, const ConvLayer<T>& layer,
                          const std::string& layer_name = "conv") {
    if (input.channels != layer.in_channels)
        throw std::invalid_argument("sparse_conv: input channels " + std::to_string(input.channels) +
                                    " do not match layer " + layer_name + " (expects " +
                                    std::to_string(layer.in_channels) + ")");
    const int oh = layer.out_h(input.height);
    const int ow = layer.out_w(input.width);
    const int cout = layer.out_channels;
    ConvResult<T> res;
    res.pre_act = Tensor3<T>(cout, oh, ow, T(0));

    const int ph = layer.pad_h(), pw = layer.pad_w(), s = layer.stride;
    const std::size_t w_cstride = static_cast<std::size_t>(layer.in_channels) * layer.kh * layer.kw;
    for (const auto& e : input.entries) {
        const T* wbase = layer.weights.data() + static_cast<std::size_t>(e.c) * layer.kh * layer.kw;
        for (int ky = 0; ky < layer.kh; ++ky) {
            int ny = e.y + ph - ky;
            if (ny < 0 || ny % s) continue;
            int oy = ny / s;
            if (oy >= oh) continue;
            for (int kx = 0; kx < layer.kw; ++kx) {
                int nx = e.x + pw - kx;
                if (nx < 0 || nx % s) continue;
                int ox = nx / s;
                if (ox >= ow) continue;
                const T* w = wbase + ky * layer.kw + kx;
                T* out = res.pre_act.data.data() + static_cast<std::size_t>(oy) * ow + ox;
                const std::size_t ostride = static_cast<std::size_t>(oh) * ow;
                for (int co = 0; co < cout; ++co)
                    out[co * ostride] += e.value * w[co * w_cstride];
                res.synops += cout;
            }
        }
    }

    for (int co = 0; co < cout; ++co) {
        T b = layer.bias[co];
        T scale = layer.has_fused_bn ? layer.fused_scale[co] : T(1);
        T shift = layer.has_fused_bn ? layer.fused_shift[co] : T(0);
        T* row0 = res.pre_act.data.data() + static_cast<std::size_t>(co) * oh * ow;
        for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i)
            row0[i] = scale * (row0[i] + b) + shift;
    }
    return res;
}

// Plain dense convolution over every input position. Reference path for the
// sparse kernel and the workhorse of the backward pass.
template <typename T>
Tensor3<T> dense_conv(const Tensor3<T>& input, const ConvLayer<T>& layer) {
    const int oh = layer.out_h(input.height);
    const int ow = layer.out_w(input.width);
    Tensor3<T> out(layer.out_channels, oh, ow, T(0));
    const int ph = layer.pad_h(), pw = layer.pad_w(), s = layer.stride;
    for (int co = 0; co < layer.out_channels; ++co) {
        for (int ci = 0; ci < layer.in_channels; ++ci)
            for (int ky = 0; ky < layer.kh; ++ky)
                for (int kx = 0; kx < layer.kw; ++kx) {
                    T w = layer.wgt(co, ci, ky, kx);
                    if (w == T(0)) continue;
                    for (int oy = 0; oy < oh; ++oy) {
                        int iy = oy * s - ph + ky;
                        if (iy < 0 || iy >= input.height) continue;
                        const T* in_row = input.row(ci, iy);
                        T* out_row = out.row(co, oy);
                        for (int ox = 0; ox < ow; ++ox) {
                            int ix = ox * s - pw + kx;
                            if (ix < 0 || ix >= input.width) continue;
                            out_row[ox] += w * in_row[ix];
                        }
                    }
                }
        T b = layer.bias[co];
        T scale = layer.has_fused_bn ? layer.fused_scale[co] : T(1);
        T shift = layer.has_fused_bn ? layer.fused_shift[co] : T(0);
        T* row0 = out.data.data() + static_cast<std::size_t>(co) * oh * ow;
        for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i)
            row0[i] = scale * (row0[i] + b) + shift;
    }
    return out;
}

// Per-channel batch normalization. Training-time statistics are computed over
// the spatial extent of each forward call; inference uses the running values.
template <typename T>
struct BatchNorm {
    int channels = 0;
    T momentum = T(0.9);
    T eps = T(1e-5);
    std::vector<T> gamma, beta;
    std::vector<T> running_mean, running_var;
    std::vector<T> grad_gamma, grad_beta;

    BatchNorm() = default;
    explicit BatchNorm(int c)
        : channels(c), gamma(c, T(1)), beta(c, T(0)), running_mean(c, T(0)), running_var(c, T(1)) {}

    void alloc_grads() {
        grad_gamma.assign(gamma.size(), T(0));
        grad_beta.assign(beta.size(), T(0));
    }

    Tensor3<T> infer(const Tensor3<T>& x) const {
        Tensor3<T> out(x.channels, x.height, x.width);
        for (int c = 0; c < channels; ++c) {
            T inv = T(1) / std::sqrt(running_var[c] + eps);
            T a = gamma[c] * inv;
            T b = beta[c] - gamma[c] * running_mean[c] * inv;
            const T* src = x.data.data() + static_cast<std::size_t>(c) * x.height * x.width;
            T* dst = out.data.data() + static_cast<std::size_t>(c) * x.height * x.width;
            for (std::size_t i = 0; i < static_cast<std::size_t>(x.height) * x.width; ++i)
                dst[i] = a * src[i] + b;
        }
        return out;
    }
};

// Folds batch-norm statistics into the conv as a per-channel scale and shift,
// so inference and cost counting see a single layer.
template <typename T>
void fold_batchnorm(ConvLayer<T>& conv, const BatchNorm<T>& bn) {
    conv.has_fused_bn = true;
    conv.fused_scale.resize(conv.out_channels);
    conv.fused_shift.resize(conv.out_channels);
    for (int c = 0; c < conv.out_channels; ++c) {
        T inv = T(1) / std::sqrt(bn.running_var[c] + bn.eps);
        conv.fused_scale[c] = bn.gamma[c] * inv;
        conv.fused_shift[c] = bn.beta[c] - bn.gamma[c] * bn.running_mean[c] * inv;
    }
}

}  // namespace seed
