#include "hanet/ops.hpp"

#include <algorithm>
#include <cmath>

namespace hanet::ops {

namespace {

size_t trailing_size(const Tensor& x) { return x.size() / x.dim(0); }

void require_rank2(const Tensor& t, const char* op) {
    if (t.rank() != 2) {
        throw DimensionError(std::string(op) + ": expected rank-2 tensor, got " +
                             t.shape_str());
    }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    const size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    if (k != b.dim(0)) {
        throw DimensionError("matmul: inner extents differ: " + a.shape_str() + " vs " +
                             b.shape_str());
    }
    Tensor out({m, n});
    const double* A = a.data();
    const double* B = b.data();
    double* C = out.data();
    for (size_t i = 0; i < m; ++i) {
        const double* arow = A + i * k;
        double* crow = C + i * n;
        for (size_t kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            const double* brow = B + kk * n;
            for (size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return out;
}

void matmul_vjp(const Tensor& g, const Tensor& a, const Tensor& b, Tensor* ga, Tensor* gb) {
    const size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    const double* G = g.data();
    const double* A = a.data();
    const double* B = b.data();
    if (ga) {
        double* GA = ga->data();
        for (size_t i = 0; i < m; ++i) {
            for (size_t kk = 0; kk < k; ++kk) {
                const double* grow = G + i * n;
                const double* brow = B + kk * n;
                double s = 0.0;
                for (size_t j = 0; j < n; ++j) s += grow[j] * brow[j];
                GA[i * k + kk] += s;
            }
        }
    }
    if (gb) {
        double* GB = gb->data();
        for (size_t kk = 0; kk < k; ++kk) {
            double* gbrow = GB + kk * n;
            for (size_t i = 0; i < m; ++i) {
                const double av = A[i * k + kk];
                const double* grow = G + i * n;
                for (size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
            }
        }
    }
}

Tensor transpose(const Tensor& a) {
    require_rank2(a, "transpose");
    const size_t m = a.dim(0), n = a.dim(1);
    Tensor out({n, m});
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) out.at2(j, i) = a.at2(i, j);
    return out;
}

Tensor conv1x1(const Tensor& x, const Tensor& w, const Tensor& bias) {
    if (x.rank() < 2) {
        throw DimensionError("conv1x1: input must have a channel dim plus positions, got " +
                             x.shape_str());
    }
    require_rank2(w, "conv1x1");
    const size_t c_in = x.dim(0), c_out = w.dim(0);
    if (w.dim(1) != c_in) {
        throw DimensionError("conv1x1: weight " + w.shape_str() + " does not match input " +
                             x.shape_str());
    }
    if (bias.size() != c_out) {
        throw DimensionError("conv1x1: bias " + bias.shape_str() + " does not match weight " +
                             w.shape_str());
    }
    const size_t L = trailing_size(x);
    std::vector<size_t> out_shape = x.shape();
    out_shape[0] = c_out;
    Tensor out(out_shape);
    const double* X = x.data();
    const double* W = w.data();
    double* O = out.data();
    for (size_t co = 0; co < c_out; ++co) {
        double* orow = O + co * L;
        for (size_t ci = 0; ci < c_in; ++ci) {
            const double wv = W[co * c_in + ci];
            const double* xrow = X + ci * L;
            for (size_t l = 0; l < L; ++l) orow[l] += wv * xrow[l];
        }
        const double bv = bias[co];
        for (size_t l = 0; l < L; ++l) orow[l] += bv;
    }
    return out;
}

void conv1x1_vjp(const Tensor& g, const Tensor& x, const Tensor& w, Tensor* gx, Tensor* gw,
                 Tensor* gbias) {
    const size_t c_in = x.dim(0), c_out = w.dim(0);
    const size_t L = trailing_size(x);
    const double* G = g.data();
    const double* X = x.data();
    const double* W = w.data();
    if (gw) {
        double* GW = gw->data();
        for (size_t co = 0; co < c_out; ++co) {
            const double* grow = G + co * L;
            for (size_t ci = 0; ci < c_in; ++ci) {
                const double* xrow = X + ci * L;
                double s = 0.0;
                for (size_t l = 0; l < L; ++l) s += grow[l] * xrow[l];
                GW[co * c_in + ci] += s;
            }
        }
    }
    if (gbias) {
        double* GB = gbias->data();
        for (size_t co = 0; co < c_out; ++co) {
            const double* grow = G + co * L;
            double s = 0.0;
            for (size_t l = 0; l < L; ++l) s += grow[l];
            GB[co] += s;
        }
    }
    if (gx) {
        double* GX = gx->data();
        for (size_t ci = 0; ci < c_in; ++ci) {
            double* gxrow = GX + ci * L;
            for (size_t co = 0; co < c_out; ++co) {
                const double wv = W[co * c_in + ci];
                const double* grow = G + co * L;
                for (size_t l = 0; l < L; ++l) gxrow[l] += wv * grow[l];
            }
        }
    }
}

namespace {

struct ConvRange {
    size_t lo, hi;  // output coordinate range touching valid (unpadded) input
};

// valid outs for  0 <= out*stride + k - 1 < extent
ConvRange conv_range(size_t extent, size_t out_extent, int k, int stride) {
    const size_t lo = (k == 0) ? 1 : 0;
    const size_t hi = (extent >= static_cast<size_t>(k))
                          ? std::min(out_extent, (extent - k) / stride + 1)
                          : 0;
    return {lo, hi};
}

}  // namespace

Tensor conv3x3(const Tensor& x, const Tensor& w, const Tensor& bias, int stride) {
    if (stride != 1 && stride != 2) {
        throw ConfigError("conv3x3: unsupported stride " + std::to_string(stride));
    }
    if (x.rank() != 3) {
        throw DimensionError("conv3x3: input must be [c x H x W], got " + x.shape_str());
    }
    if (w.rank() != 4 || w.dim(2) != 3 || w.dim(3) != 3) {
        throw DimensionError("conv3x3: weight must be [c_out x c_in x 3 x 3], got " +
                             w.shape_str());
    }
    const size_t c_in = x.dim(0), H = x.dim(1), W = x.dim(2);
    const size_t c_out = w.dim(0);
    if (w.dim(1) != c_in) {
        throw DimensionError("conv3x3: weight " + w.shape_str() + " does not match input " +
                             x.shape_str());
    }
    if (bias.size() != c_out) {
        throw DimensionError("conv3x3: bias " + bias.shape_str() + " does not match weight " +
                             w.shape_str());
    }
    const size_t s = static_cast<size_t>(stride);
    const size_t Ho = (H + s - 1) / s;
    const size_t Wo = (W + s - 1) / s;
    Tensor out({c_out, Ho, Wo});
    const double* X = x.data();
    const double* Wt = w.data();
    double* O = out.data();
    for (size_t co = 0; co < c_out; ++co) {
        for (size_t ci = 0; ci < c_in; ++ci) {
            for (int ky = 0; ky < 3; ++ky) {
                const ConvRange yr = conv_range(H, Ho, ky, stride);
                for (int kx = 0; kx < 3; ++kx) {
                    const ConvRange xr = conv_range(W, Wo, kx, stride);
                    const double wv = Wt[((co * c_in + ci) * 3 + ky) * 3 + kx];
                    for (size_t y = yr.lo; y < yr.hi; ++y) {
                        const size_t xbase = (ci * H + y * s + ky - 1) * W;
                        double* orow = O + (co * Ho + y) * Wo;
                        for (size_t xo = xr.lo; xo < xr.hi; ++xo)
                            orow[xo] += wv * X[xbase + xo * s + kx - 1];
                    }
                }
            }
        }
        const double bv = bias[co];
        double* oc = O + co * Ho * Wo;
        for (size_t i = 0; i < Ho * Wo; ++i) oc[i] += bv;
    }
    return out;
}

void conv3x3_vjp(const Tensor& g, const Tensor& x, const Tensor& w, int stride, Tensor* gx,
                 Tensor* gw, Tensor* gbias) {
    const size_t c_in = x.dim(0), H = x.dim(1), W = x.dim(2);
    const size_t c_out = w.dim(0);
    const size_t s = static_cast<size_t>(stride);
    const size_t Ho = g.dim(1), Wo = g.dim(2);
    const double* G = g.data();
    const double* X = x.data();
    const double* Wt = w.data();
    if (gbias) {
        double* GB = gbias->data();
        for (size_t co = 0; co < c_out; ++co) {
            const double* gc = G + co * Ho * Wo;
            double sb = 0.0;
            for (size_t i = 0; i < Ho * Wo; ++i) sb += gc[i];
            GB[co] += sb;
        }
    }
    for (size_t co = 0; co < c_out; ++co) {
        for (size_t ci = 0; ci < c_in; ++ci) {
            for (int ky = 0; ky < 3; ++ky) {
                const ConvRange yr = conv_range(H, Ho, ky, stride);
                for (int kx = 0; kx < 3; ++kx) {
                    const ConvRange xr = conv_range(W, Wo, kx, stride);
                    const size_t widx = ((co * c_in + ci) * 3 + ky) * 3 + kx;
                    const double wv = Wt[widx];
                    double ws = 0.0;
                    for (size_t y = yr.lo; y < yr.hi; ++y) {
                        const size_t xbase = (ci * H + y * s + ky - 1) * W;
                        const double* grow = G + (co * Ho + y) * Wo;
                        double* GX = gx ? gx->data() : nullptr;
                        for (size_t xo = xr.lo; xo < xr.hi; ++xo) {
                            const size_t xi = xbase + xo * s + kx - 1;
                            ws += grow[xo] * X[xi];
                            if (GX) GX[xi] += wv * grow[xo];
                        }
                    }
                    if (gw) gw->data()[widx] += ws;
                }
            }
        }
    }
}

Tensor bilinear_upsample(const Tensor& x, int factor) {
    if (factor < 1) {
        throw ConfigError("bilinear_upsample: factor must be >= 1, got " +
                          std::to_string(factor));
    }
    if (x.rank() != 3) {
        throw DimensionError("bilinear_upsample: input must be [c x H x W], got " +
                             x.shape_str());
    }
    const size_t c = x.dim(0), H = x.dim(1), W = x.dim(2);
    const size_t f = static_cast<size_t>(factor);
    const size_t Ho = H * f, Wo = W * f;
    Tensor out({c, Ho, Wo});
    const double inv = 1.0 / static_cast<double>(factor);
    for (size_t y = 0; y < Ho; ++y) {
        double sy = (static_cast<double>(y) + 0.5) * inv - 0.5;
        if (sy < 0.0) sy = 0.0;
        size_t y0 = std::min(static_cast<size_t>(sy), H - 1);
        size_t y1 = std::min(y0 + 1, H - 1);
        const double ty = sy - static_cast<double>(y0);
        for (size_t xo = 0; xo < Wo; ++xo) {
            double sx = (static_cast<double>(xo) + 0.5) * inv - 0.5;
            if (sx < 0.0) sx = 0.0;
            size_t x0 = std::min(static_cast<size_t>(sx), W - 1);
            size_t x1 = std::min(x0 + 1, W - 1);
            const double tx = sx - static_cast<double>(x0);
            for (size_t ch = 0; ch < c; ++ch) {
                const double p00 = x.at3(ch, y0, x0);
                const double p01 = x.at3(ch, y0, x1);
                const double p10 = x.at3(ch, y1, x0);
                const double p11 = x.at3(ch, y1, x1);
                // lerp form keeps constant fields exact
                const double r0 = p00 + tx * (p01 - p00);
                const double r1 = p10 + tx * (p11 - p10);
                out.at3(ch, y, xo) = r0 + ty * (r1 - r0);
            }
        }
    }
    return out;
}

void bilinear_upsample_vjp(const Tensor& g, const Tensor& x, int factor, Tensor* gx) {
    if (!gx) return;
    const size_t c = x.dim(0), H = x.dim(1), W = x.dim(2);
    const size_t f = static_cast<size_t>(factor);
    const size_t Ho = H * f, Wo = W * f;
    const double inv = 1.0 / static_cast<double>(factor);
    for (size_t y = 0; y < Ho; ++y) {
        double sy = (static_cast<double>(y) + 0.5) * inv - 0.5;
        if (sy < 0.0) sy = 0.0;
        size_t y0 = std::min(static_cast<size_t>(sy), H - 1);
        size_t y1 = std::min(y0 + 1, H - 1);
        const double ty = sy - static_cast<double>(y0);
        for (size_t xo = 0; xo < Wo; ++xo) {
            double sx = (static_cast<double>(xo) + 0.5) * inv - 0.5;
            if (sx < 0.0) sx = 0.0;
            size_t x0 = std::min(static_cast<size_t>(sx), W - 1);
            size_t x1 = std::min(x0 + 1, W - 1);
            const double tx = sx - static_cast<double>(x0);
            for (size_t ch = 0; ch < c; ++ch) {
                const double gv = g.at3(ch, y, xo);
                gx->at3(ch, y0, x0) += (1.0 - ty) * (1.0 - tx) * gv;
                gx->at3(ch, y0, x1) += (1.0 - ty) * tx * gv;
                gx->at3(ch, y1, x0) += ty * (1.0 - tx) * gv;
                gx->at3(ch, y1, x1) += ty * tx * gv;
            }
        }
    }
}

Tensor relu(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

void relu_vjp(const Tensor& g, const Tensor& x, Tensor* gx) {
    if (!gx) return;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) (*gx)[i] += g[i];
    }
}

Tensor row_softmax(const Tensor& a) {
    require_rank2(a, "row_softmax");
    const size_t m = a.dim(0), n = a.dim(1);
    Tensor out({m, n});
    for (size_t i = 0; i < m; ++i) {
        const double* arow = a.data() + i * n;
        double* orow = out.data() + i * n;
        double mx = arow[0];
        for (size_t j = 1; j < n; ++j) mx = std::max(mx, arow[j]);
        double denom = 0.0;
        for (size_t j = 0; j < n; ++j) {
            orow[j] = std::exp(arow[j] - mx);
            denom += orow[j];
        }
        for (size_t j = 0; j < n; ++j) orow[j] /= denom;
    }
    return out;
}

void row_softmax_vjp(const Tensor& g, const Tensor& softmax_out, Tensor* ga) {
    if (!ga) return;
    const size_t m = softmax_out.dim(0), n = softmax_out.dim(1);
    for (size_t i = 0; i < m; ++i) {
        const double* srow = softmax_out.data() + i * n;
        const double* grow = g.data() + i * n;
        double dot = 0.0;
        for (size_t j = 0; j < n; ++j) dot += grow[j] * srow[j];
        double* garow = ga->data() + i * n;
        for (size_t j = 0; j < n; ++j) garow[j] += srow[j] * (grow[j] - dot);
    }
}

double cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
    if (logits.rank() < 2) {
        throw DimensionError("cross_entropy: logits must be [K x positions], got " +
                             logits.shape_str());
    }
    const size_t K = logits.dim(0);
    const size_t L = trailing_size(logits);
    if (labels.size() != L) {
        throw DimensionError("cross_entropy: " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(L) + " positions");
    }
    const double* Z = logits.data();
    double total = 0.0;
    for (size_t l = 0; l < L; ++l) {
        const int y = labels[l];
        if (y < 0 || static_cast<size_t>(y) >= K) {
            throw DataError("cross_entropy: label " + std::to_string(y) +
                            " out of range [0," + std::to_string(K) + ") at position " +
                            std::to_string(l));
        }
        double mx = Z[l];
        for (size_t k = 1; k < K; ++k) mx = std::max(mx, Z[k * L + l]);
        double denom = 0.0;
        for (size_t k = 0; k < K; ++k) denom += std::exp(Z[k * L + l] - mx);
        total += std::log(denom) - (Z[static_cast<size_t>(y) * L + l] - mx);
    }
    return total / static_cast<double>(L);
}

void cross_entropy_vjp(double g, const Tensor& logits, const std::vector<int>& labels,
                       Tensor* glogits) {
    if (!glogits) return;
    const size_t K = logits.dim(0);
    const size_t L = trailing_size(logits);
    const double* Z = logits.data();
    double* GL = glogits->data();
    const double scale = g / static_cast<double>(L);
    for (size_t l = 0; l < L; ++l) {
        double mx = Z[l];
        for (size_t k = 1; k < K; ++k) mx = std::max(mx, Z[k * L + l]);
        double denom = 0.0;
        for (size_t k = 0; k < K; ++k) denom += std::exp(Z[k * L + l] - mx);
        for (size_t k = 0; k < K; ++k) {
            double p = std::exp(Z[k * L + l] - mx) / denom;
            if (static_cast<int>(k) == labels[l]) p -= 1.0;
            GL[k * L + l] += scale * p;
        }
    }
}

Tensor scaled_gram(const Tensor& q, const Tensor& k, double alpha) {
    require_rank2(q, "scaled_gram");
    require_rank2(k, "scaled_gram");
    if (!q.same_shape(k)) {
        throw DimensionError("scaled_gram: q " + q.shape_str() + " vs k " + k.shape_str());
    }
    const size_t c = q.dim(0), L = q.dim(1);
    Tensor out({L, L});
    const double* Q = q.data();
    const double* Kd = k.data();
    double* A = out.data();
    for (size_t ch = 0; ch < c; ++ch) {
        const double* qrow = Q + ch * L;
        const double* krow = Kd + ch * L;
        for (size_t i = 0; i < L; ++i) {
            const double qv = qrow[i];
            double* arow = A + i * L;
            for (size_t j = 0; j < L; ++j) arow[j] += qv * krow[j];
        }
    }
    for (size_t i = 0; i < L * L; ++i) A[i] *= alpha;
    return out;
}

void scaled_gram_vjp(const Tensor& g, const Tensor& q, const Tensor& k, double alpha,
                     Tensor* gq, Tensor* gk) {
    const size_t c = q.dim(0), L = q.dim(1);
    const double* G = g.data();
    const double* Q = q.data();
    const double* Kd = k.data();
    if (gq) {
        double* GQ = gq->data();
        for (size_t ch = 0; ch < c; ++ch) {
            const double* krow = Kd + ch * L;
            for (size_t i = 0; i < L; ++i) {
                const double* grow = G + i * L;
                double s = 0.0;
                for (size_t j = 0; j < L; ++j) s += grow[j] * krow[j];
                GQ[ch * L + i] += alpha * s;
            }
        }
    }
    if (gk) {
        double* GK = gk->data();
        for (size_t ch = 0; ch < c; ++ch) {
            const double* qrow = Q + ch * L;
            double* gkrow = GK + ch * L;
            for (size_t i = 0; i < L; ++i) {
                const double qv = alpha * qrow[i];
                const double* grow = G + i * L;
                for (size_t j = 0; j < L; ++j) gkrow[j] += qv * grow[j];
            }
        }
    }
}

Tensor concat_channels(const std::vector<const Tensor*>& xs) {
    if (xs.empty()) throw DimensionError("concat_channels: no inputs");
    const Tensor& first = *xs[0];
    size_t total_c = 0;
    const size_t L = trailing_size(first);
    for (const Tensor* x : xs) {
        if (x->rank() != first.rank() || trailing_size(*x) != L) {
            throw DimensionError("concat_channels: trailing extents differ: " +
                                 first.shape_str() + " vs " + x->shape_str());
        }
        for (size_t d = 1; d < first.rank(); ++d) {
            if (x->dim(d) != first.dim(d)) {
                throw DimensionError("concat_channels: trailing extents differ: " +
                                     first.shape_str() + " vs " + x->shape_str());
            }
        }
        total_c += x->dim(0);
    }
    std::vector<size_t> out_shape = first.shape();
    out_shape[0] = total_c;
    Tensor out(out_shape);
    size_t offset = 0;
    for (const Tensor* x : xs) {
        std::copy(x->data(), x->data() + x->size(), out.data() + offset);
        offset += x->size();
    }
    return out;
}

void concat_channels_vjp(const Tensor& g, const std::vector<const Tensor*>& xs,
                         const std::vector<Tensor*>& gxs) {
    size_t offset = 0;
    for (size_t idx = 0; idx < xs.size(); ++idx) {
        const size_t n = xs[idx]->size();
        if (gxs[idx]) {
            double* dst = gxs[idx]->data();
            const double* src = g.data() + offset;
            for (size_t i = 0; i < n; ++i) dst[i] += src[i];
        }
        offset += n;
    }
}

std::vector<int> argmax_classes(const Tensor& logits) {
    const size_t K = logits.dim(0);
    const size_t L = trailing_size(logits);
    std::vector<int> out(L, 0);
    const double* Z = logits.data();
    for (size_t l = 0; l < L; ++l) {
        double best = Z[l];
        int arg = 0;
        for (size_t k = 1; k < K; ++k) {
            if (Z[k * L + l] > best) {
                best = Z[k * L + l];
                arg = static_cast<int>(k);
            }
        }
        out[l] = arg;
    }
    return out;
}

}  // namespace hanet::ops
