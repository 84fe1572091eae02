#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "ssvep/nnet/tensor.hpp"

namespace ssvep::nn {

template <typename Real>
using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using MatMap = Eigen::Map<RowMat<Real>>;
template <typename Real>
using ConstMatMap = Eigen::Map<const RowMat<Real>>;

// "Same" padding for even kernels: pad_left = floor((k-1)/2), the extra
// sample goes on the right.
inline int same_pad_left(int kernel) { return (kernel - 1) / 2; }

// ---------------------------------------------------------------------------
// Temporal convolution (cross-correlation along time, one kernel per output
// filter, shared across EEG channels). x: (n,1,C,T), w: (F1 x kt) row-major,
// y: (n,F1,C,T). Runs as an im2col GEMM per sample.
// ---------------------------------------------------------------------------

template <typename Real>
void conv_temporal_forward(const Tensor4<Real>& x, const RowMat<Real>& w, Tensor4<Real>& y) {
    const int ct = x.h, t_len = x.w;
    const int f1 = static_cast<int>(w.rows());
    const int kt = static_cast<int>(w.cols());
    if (x.f != 1) throw Error("conv_temporal: input must have a single filter map");
    if (y.n != x.n || y.f != f1 || y.h != ct || y.w != t_len) {
        throw Error("conv_temporal: output shape mismatch");
    }
    const int pad_l = same_pad_left(kt);

    RowMat<Real> patches(kt, static_cast<Eigen::Index>(ct) * t_len);
    for (int i = 0; i < x.n; ++i) {
        patches.setZero();
        const Real* xs = x.sample(i);
        for (int c = 0; c < ct; ++c) {
            const Real* row = xs + static_cast<std::size_t>(c) * t_len;
            for (int k = 0; k < kt; ++k) {
                // y(t) needs x(t + k - pad_l): clip to the valid range.
                const int t0 = std::max(0, pad_l - k);
                const int t1 = std::min(t_len, t_len + pad_l - k);
                for (int t = t0; t < t1; ++t) {
                    patches(k, static_cast<Eigen::Index>(c) * t_len + t) = row[t + k - pad_l];
                }
            }
        }
        MatMap<Real> out(y.sample(i), f1, static_cast<Eigen::Index>(ct) * t_len);
        out.noalias() = w * patches;
    }
    debug_check_finite(y, "conv_temporal");
}

template <typename Real>
void conv_temporal_backward(const Tensor4<Real>& x, const RowMat<Real>& w, const Tensor4<Real>& dy,
                            RowMat<Real>& dw, Tensor4<Real>* dx) {
    const int ct = x.h, t_len = x.w;
    const int f1 = static_cast<int>(w.rows());
    const int kt = static_cast<int>(w.cols());
    const int pad_l = same_pad_left(kt);

    dw.setZero(f1, kt);
    if (dx) dx->fill(Real(0));

    RowMat<Real> patches(kt, static_cast<Eigen::Index>(ct) * t_len);
    RowMat<Real> dpatches;
    for (int i = 0; i < x.n; ++i) {
        patches.setZero();
        const Real* xs = x.sample(i);
        for (int c = 0; c < ct; ++c) {
            const Real* row = xs + static_cast<std::size_t>(c) * t_len;
            for (int k = 0; k < kt; ++k) {
                const int t0 = std::max(0, pad_l - k);
                const int t1 = std::min(t_len, t_len + pad_l - k);
                for (int t = t0; t < t1; ++t) {
                    patches(k, static_cast<Eigen::Index>(c) * t_len + t) = row[t + k - pad_l];
                }
            }
        }
        ConstMatMap<Real> dout(dy.sample(i), f1, static_cast<Eigen::Index>(ct) * t_len);
        dw.noalias() += dout * patches.transpose();
        if (dx) {
            dpatches.noalias() = w.transpose() * dout;  // (kt x C*T)
            Real* dxs = dx->sample(i);
            for (int c = 0; c < ct; ++c) {
                Real* drow = dxs + static_cast<std::size_t>(c) * t_len;
                for (int k = 0; k < kt; ++k) {
                    const int t0 = std::max(0, pad_l - k);
                    const int t1 = std::min(t_len, t_len + pad_l - k);
                    for (int t = t0; t < t1; ++t) {
                        drow[t + k - pad_l] += dpatches(k, static_cast<Eigen::Index>(c) * t_len + t);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Depthwise spatial convolution, valid mode: collapses the channel axis.
// x: (n,F1,C,T), w: (D*F1 x C); output filter j = d*F1 + f reads input
// filter f = j mod F1. y: (n,D*F1,1,T).
// ---------------------------------------------------------------------------

template <typename Real>
void depthwise_spatial_forward(const Tensor4<Real>& x, const RowMat<Real>& w, Tensor4<Real>& y) {
    const int f1 = x.f, c = x.h, t_len = x.w;
    const int df1 = static_cast<int>(w.rows());
    if (static_cast<int>(w.cols()) != c) throw Error("depthwise: weight/channel mismatch");
    if (df1 % f1 != 0) throw Error("depthwise: output filters must be a multiple of F1");
    if (y.n != x.n || y.f != df1 || y.h != 1 || y.w != t_len) {
        throw Error("depthwise: output shape mismatch");
    }
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < df1; ++j) {
            const int f = j % f1;
            Real* out = y.sample(i) + static_cast<std::size_t>(j) * t_len;
            std::fill(out, out + t_len, Real(0));
            for (int ch = 0; ch < c; ++ch) {
                const Real wv = w(j, ch);
                const Real* in =
                    x.sample(i) + (static_cast<std::size_t>(f) * c + ch) * t_len;
                for (int t = 0; t < t_len; ++t) out[t] += wv * in[t];
            }
        }
    }
    debug_check_finite(y, "depthwise_spatial");
}

template <typename Real>
void depthwise_spatial_backward(const Tensor4<Real>& x, const RowMat<Real>& w,
                                const Tensor4<Real>& dy, RowMat<Real>& dw, Tensor4<Real>* dx) {
    const int f1 = x.f, c = x.h, t_len = x.w;
    const int df1 = static_cast<int>(w.rows());
    dw.setZero(df1, c);
    if (dx) dx->fill(Real(0));
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < df1; ++j) {
            const int f = j % f1;
            const Real* dout = dy.sample(i) + static_cast<std::size_t>(j) * t_len;
            for (int ch = 0; ch < c; ++ch) {
                const Real* in = x.sample(i) + (static_cast<std::size_t>(f) * c + ch) * t_len;
                Real acc = 0;
                for (int t = 0; t < t_len; ++t) acc += dout[t] * in[t];
                dw(j, ch) += acc;
                if (dx) {
                    Real* din = dx->sample(i) + (static_cast<std::size_t>(f) * c + ch) * t_len;
                    const Real wv = w(j, ch);
                    for (int t = 0; t < t_len; ++t) din[t] += wv * dout[t];
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Separable convolution, stage 1: per-filter temporal convolution with same
// padding. x: (n,J,1,T), w: (J x ks), y: (n,J,1,T).
// ---------------------------------------------------------------------------

template <typename Real>
void separable_depthwise_forward(const Tensor4<Real>& x, const RowMat<Real>& w, Tensor4<Real>& y) {
    const int j_n = x.f, t_len = x.w;
    const int ks = static_cast<int>(w.cols());
    if (static_cast<int>(w.rows()) != j_n) throw Error("separable depthwise: filter mismatch");
    const int pad_l = same_pad_left(ks);
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < j_n; ++j) {
            const Real* in = x.sample(i) + static_cast<std::size_t>(j) * t_len;
            Real* out = y.sample(i) + static_cast<std::size_t>(j) * t_len;
            for (int t = 0; t < t_len; ++t) {
                Real acc = 0;
                const int k0 = std::max(0, pad_l - t);
                const int k1 = std::min(ks, t_len + pad_l - t);
                for (int k = k0; k < k1; ++k) acc += w(j, k) * in[t + k - pad_l];
                out[t] = acc;
            }
        }
    }
    debug_check_finite(y, "separable_depthwise");
}

template <typename Real>
void separable_depthwise_backward(const Tensor4<Real>& x, const RowMat<Real>& w,
                                  const Tensor4<Real>& dy, RowMat<Real>& dw, Tensor4<Real>* dx) {
    const int j_n = x.f, t_len = x.w;
    const int ks = static_cast<int>(w.cols());
    const int pad_l = same_pad_left(ks);
    dw.setZero(j_n, ks);
    if (dx) dx->fill(Real(0));
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < j_n; ++j) {
            const Real* in = x.sample(i) + static_cast<std::size_t>(j) * t_len;
            const Real* dout = dy.sample(i) + static_cast<std::size_t>(j) * t_len;
            Real* din = dx ? dx->sample(i) + static_cast<std::size_t>(j) * t_len : nullptr;
            for (int t = 0; t < t_len; ++t) {
                const int k0 = std::max(0, pad_l - t);
                const int k1 = std::min(ks, t_len + pad_l - t);
                for (int k = k0; k < k1; ++k) {
                    dw(j, k) += dout[t] * in[t + k - pad_l];
                    if (din) din[t + k - pad_l] += w(j, k) * dout[t];
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Separable convolution, stage 2: 1x1 pointwise mixing across filters.
// x: (n,J,1,T), w: (F2 x J), y: (n,F2,1,T).
// ---------------------------------------------------------------------------

template <typename Real>
void pointwise_forward(const Tensor4<Real>& x, const RowMat<Real>& w, Tensor4<Real>& y) {
    const int j_n = x.f, t_len = x.w;
    const int f2 = static_cast<int>(w.rows());
    if (static_cast<int>(w.cols()) != j_n) throw Error("pointwise: filter mismatch");
    for (int i = 0; i < x.n; ++i) {
        ConstMatMap<Real> in(x.sample(i), j_n, t_len);
        MatMap<Real> out(y.sample(i), f2, t_len);
        out.noalias() = w * in;
    }
    debug_check_finite(y, "pointwise");
}

template <typename Real>
void pointwise_backward(const Tensor4<Real>& x, const RowMat<Real>& w, const Tensor4<Real>& dy,
                        RowMat<Real>& dw, Tensor4<Real>* dx) {
    const int j_n = x.f, t_len = x.w;
    const int f2 = static_cast<int>(w.rows());
    dw.setZero(f2, j_n);
    for (int i = 0; i < x.n; ++i) {
        ConstMatMap<Real> in(x.sample(i), j_n, t_len);
        ConstMatMap<Real> dout(dy.sample(i), f2, t_len);
        dw.noalias() += dout * in.transpose();
        if (dx) {
            MatMap<Real> din(dx->sample(i), j_n, t_len);
            din.noalias() = w.transpose() * dout;
        }
    }
}

// ---------------------------------------------------------------------------
// Batch normalization over the filter axis (statistics across batch, height
// and width). Training mode normalizes with batch statistics and updates the
// running averages; inference uses the stored running averages.
// ---------------------------------------------------------------------------

template <typename Real>
struct BatchNormParams {
    std::vector<Real> gamma, beta;
    std::vector<Real> run_mean, run_var;  // not trained; biased variance

    explicit BatchNormParams(int filters = 0)
        : gamma(filters, Real(1)), beta(filters, Real(0)),
          run_mean(filters, Real(0)), run_var(filters, Real(1)) {}

    int filters() const { return static_cast<int>(gamma.size()); }
};

template <typename Real>
struct BatchNormCache {
    Tensor4<Real> xhat;
    std::vector<Real> invstd;  // per filter
};

template <typename Real>
void batchnorm_forward(const Tensor4<Real>& x, BatchNormParams<Real>& p, bool train, Real momentum,
                       Real eps, Tensor4<Real>& y, BatchNormCache<Real>* cache) {
    const int nf = x.f;
    if (p.filters() != nf) throw Error("batchnorm: filter count mismatch");
    const std::size_t m = static_cast<std::size_t>(x.n) * x.h * x.w;
    if (train && cache) {
        cache->xhat = Tensor4<Real>(x.n, x.f, x.h, x.w);
        cache->invstd.assign(nf, Real(0));
    }
    const int plane = x.h * x.w;
    for (int j = 0; j < nf; ++j) {
        Real mean, var;
        if (train) {
            Real sum = 0, sq = 0;
            for (int i = 0; i < x.n; ++i) {
                const Real* base = x.sample(i) + static_cast<std::size_t>(j) * plane;
                for (int e = 0; e < plane; ++e) {
                    sum += base[e];
                    sq += base[e] * base[e];
                }
            }
            mean = sum / static_cast<Real>(m);
            var = sq / static_cast<Real>(m) - mean * mean;
            if (var < 0) var = 0;  // numerical guard
            p.run_mean[j] = momentum * p.run_mean[j] + (Real(1) - momentum) * mean;
            p.run_var[j] = momentum * p.run_var[j] + (Real(1) - momentum) * var;
        } else {
            mean = p.run_mean[j];
            var = p.run_var[j];
        }
        const Real invstd = Real(1) / std::sqrt(var + eps);
        if (train && cache) cache->invstd[j] = invstd;
        const Real g = p.gamma[j], b = p.beta[j];
        for (int i = 0; i < x.n; ++i) {
            const Real* in = x.sample(i) + static_cast<std::size_t>(j) * plane;
            Real* out = y.sample(i) + static_cast<std::size_t>(j) * plane;
            Real* xh = (train && cache)
                           ? cache->xhat.sample(i) + static_cast<std::size_t>(j) * plane
                           : nullptr;
            for (int e = 0; e < plane; ++e) {
                const Real xhat = (in[e] - mean) * invstd;
                if (xh) xh[e] = xhat;
                out[e] = g * xhat + b;
            }
        }
    }
    debug_check_finite(y, "batchnorm");
}

template <typename Real>
void batchnorm_backward(const BatchNormCache<Real>& cache, const BatchNormParams<Real>& p,
                        const Tensor4<Real>& dy, Tensor4<Real>& dx, std::vector<Real>& dgamma,
                        std::vector<Real>& dbeta) {
    const int nf = dy.f;
    const int plane = dy.h * dy.w;
    const Real m = static_cast<Real>(static_cast<std::size_t>(dy.n) * plane);
    dgamma.assign(nf, Real(0));
    dbeta.assign(nf, Real(0));
    for (int j = 0; j < nf; ++j) {
        Real sum_dy = 0, sum_dy_xhat = 0;
        for (int i = 0; i < dy.n; ++i) {
            const Real* d = dy.sample(i) + static_cast<std::size_t>(j) * plane;
            const Real* xh = cache.xhat.sample(i) + static_cast<std::size_t>(j) * plane;
            for (int e = 0; e < plane; ++e) {
                sum_dy += d[e];
                sum_dy_xhat += d[e] * xh[e];
            }
        }
        dgamma[j] = sum_dy_xhat;
        dbeta[j] = sum_dy;
        const Real k = p.gamma[j] * cache.invstd[j];
        const Real mean_dy = sum_dy / m;
        const Real mean_dy_xhat = sum_dy_xhat / m;
        for (int i = 0; i < dy.n; ++i) {
            const Real* d = dy.sample(i) + static_cast<std::size_t>(j) * plane;
            const Real* xh = cache.xhat.sample(i) + static_cast<std::size_t>(j) * plane;
            Real* out = dx.sample(i) + static_cast<std::size_t>(j) * plane;
            for (int e = 0; e < plane; ++e) {
                out[e] = k * (d[e] - mean_dy - xh[e] * mean_dy_xhat);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// ELU (alpha = 1), average pooling along time, inverted dropout.
// ---------------------------------------------------------------------------

template <typename Real>
void elu_forward(const Tensor4<Real>& x, Tensor4<Real>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Real v = x.v[i];
        y.v[i] = v > 0 ? v : std::expm1(v);
    }
}

// Uses the forward output: for x <= 0, dy/dx = exp(x) = y + 1.
template <typename Real>
void elu_backward(const Tensor4<Real>& y, const Tensor4<Real>& dy, Tensor4<Real>& dx) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        dx.v[i] = y.v[i] > 0 ? dy.v[i] : dy.v[i] * (y.v[i] + Real(1));
    }
}

template <typename Real>
void avgpool_time_forward(const Tensor4<Real>& x, int width, Tensor4<Real>& y) {
    if (width < 1 || x.w % width != 0) {
        throw InvalidInput("avgpool: time axis " + std::to_string(x.w) +
                           " not divisible by window " + std::to_string(width));
    }
    const int out_w = x.w / width;
    const Real inv = Real(1) / static_cast<Real>(width);
    const int maps = x.f * x.h;
    for (int i = 0; i < x.n; ++i) {
        for (int jm = 0; jm < maps; ++jm) {
            const Real* in = x.sample(i) + static_cast<std::size_t>(jm) * x.w;
            Real* out = y.sample(i) + static_cast<std::size_t>(jm) * out_w;
            for (int t = 0; t < out_w; ++t) {
                Real acc = 0;
                for (int k = 0; k < width; ++k) acc += in[t * width + k];
                out[t] = acc * inv;
            }
        }
    }
}

template <typename Real>
void avgpool_time_backward(const Tensor4<Real>& dy, int width, Tensor4<Real>& dx) {
    const Real inv = Real(1) / static_cast<Real>(width);
    const int maps = dy.f * dy.h;
    for (int i = 0; i < dy.n; ++i) {
        for (int jm = 0; jm < maps; ++jm) {
            const Real* d = dy.sample(i) + static_cast<std::size_t>(jm) * dy.w;
            Real* out = dx.sample(i) + static_cast<std::size_t>(jm) * dx.w;
            for (int t = 0; t < dy.w; ++t) {
                for (int k = 0; k < width; ++k) out[t * width + k] = d[t] * inv;
            }
        }
    }
}

template <typename Real>
void dropout_forward(const Tensor4<Real>& x, Real rate, bool train, std::mt19937_64& rng,
                     Tensor4<Real>& y, std::vector<std::uint8_t>* mask) {
    if (rate < 0 || rate >= 1) throw InvalidInput("dropout rate must be in [0, 1)");
    if (!train || rate == 0) {
        y.v = x.v;
        if (mask) mask->assign(x.size(), 1);
        return;
    }
    const Real scale = Real(1) / (Real(1) - rate);
    if (mask) mask->resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const bool keep = u >= static_cast<double>(rate);
        if (mask) (*mask)[i] = keep ? 1 : 0;
        y.v[i] = keep ? x.v[i] * scale : Real(0);
    }
}

template <typename Real>
void dropout_backward(const std::vector<std::uint8_t>& mask, Real rate, bool train,
                      const Tensor4<Real>& dy, Tensor4<Real>& dx) {
    if (!train || rate == 0) {
        dx.v = dy.v;
        return;
    }
    const Real scale = Real(1) / (Real(1) - rate);
    for (std::size_t i = 0; i < dy.size(); ++i) {
        dx.v[i] = mask[i] ? dy.v[i] * scale : Real(0);
    }
}

// ---------------------------------------------------------------------------
// Dense layer without bias, row-wise softmax, categorical cross-entropy.
// ---------------------------------------------------------------------------

template <typename Real>
void dense_forward(const RowMat<Real>& flat, const RowMat<Real>& w, RowMat<Real>& logits) {
    logits.noalias() = flat * w.transpose();
}

template <typename Real>
void softmax_rows(RowMat<Real>& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Real mx = m.row(i).maxCoeff();
        m.row(i) = (m.row(i).array() - mx).exp();
        m.row(i) /= m.row(i).sum();
    }
}

// Mean over the batch of -sum_j t log p, with p clamped at 1e-12.
template <typename Real>
Real cross_entropy(const RowMat<Real>& probs, const RowMat<Real>& onehot) {
    Real loss = 0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        for (Eigen::Index j = 0; j < probs.cols(); ++j) {
            if (onehot(i, j) != Real(0)) {
                const Real p = std::max(probs(i, j), Real(1e-12));
                loss -= onehot(i, j) * std::log(p);
            }
        }
    }
    return loss / static_cast<Real>(probs.rows());
}

// d(loss)/d(logits) for softmax + cross-entropy: (p - t) / n.
template <typename Real>
RowMat<Real> cross_entropy_logit_grad(const RowMat<Real>& probs, const RowMat<Real>& onehot) {
    return (probs - onehot) / static_cast<Real>(probs.rows());
}

}  // namespace ssvep::nn
