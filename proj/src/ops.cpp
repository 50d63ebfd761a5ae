#include "tgs/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tgs {

namespace {

using detail::Node;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                                        " vs " + shape_str(b.shape()));
}

// C (MxN) += A (MxK) B (KxN)
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

// C (MxN) += A (MxK) B^T, with B stored (NxK)
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
            ci[j] += s;
        }
    }
}

// C (MxN) += A^T B, with A stored (KxM), B stored (KxN)
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = ap[i];
            double* ci = c + i * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
    auto pa = a.node(), pb = b.node();
    return make_op(a.shape(), std::move(out), {a, b}, [pa, pb](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            pa->scratch[i] += self.scratch[i];
            pb->scratch[i] += self.scratch[i];
        }
    });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
    auto pa = a.node(), pb = b.node();
    return make_op(a.shape(), std::move(out), {a, b}, [pa, pb](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            pa->scratch[i] += self.scratch[i];
            pb->scratch[i] -= self.scratch[i];
        }
    });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
    auto pa = a.node(), pb = b.node();
    return make_op(a.shape(), std::move(out), {a, b}, [pa, pb](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            pa->scratch[i] += self.scratch[i] * pb->data[i];
            pb->scratch[i] += self.scratch[i] * pa->data[i];
        }
    });
}

Tensor div(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "div");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] / b.data()[i];
    auto pa = a.node(), pb = b.node();
    return make_op(a.shape(), std::move(out), {a, b}, [pa, pb](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            const double bi = pb->data[i];
            pa->scratch[i] += self.scratch[i] / bi;
            pb->scratch[i] -= self.scratch[i] * pa->data[i] / (bi * bi);
        }
    });
}

Tensor add_scalar(const Tensor& a, double c) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + c;
    auto pa = a.node();
    return make_op(a.shape(), std::move(out), {a}, [pa](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) pa->scratch[i] += self.scratch[i];
    });
}

Tensor mul_scalar(const Tensor& a, double c) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * c;
    auto pa = a.node();
    return make_op(a.shape(), std::move(out), {a}, [pa, c](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) pa->scratch[i] += self.scratch[i] * c;
    });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require(a.shape().size() == 2 && b.shape().size() == 2, "matmul: expects 2-D tensors");
    const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    require(b.shape()[0] == k, "matmul: inner dimensions disagree " + shape_str(a.shape()) + " x " +
                                   shape_str(b.shape()));
    std::vector<double> out(m * n, 0.0);
    gemm_nn(a.data().data(), b.data().data(), out.data(), m, k, n);
    auto pa = a.node(), pb = b.node();
    return make_op({m, n}, std::move(out), {a, b}, [pa, pb, m, k, n](Node& self) {
        // dA += dC B^T ; dB += A^T dC
        gemm_nt(self.scratch.data(), pb->data.data(), pa->scratch.data(), m, n, k);
        gemm_tn(pa->data.data(), self.scratch.data(), pb->scratch.data(), k, m, n);
    });
}

Tensor transpose(const Tensor& a) {
    require(a.shape().size() == 2, "transpose: expects a 2-D tensor");
    const std::size_t r = a.shape()[0], c = a.shape()[1];
    std::vector<double> out(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[j * r + i] = a.data()[i * c + j];
    auto pa = a.node();
    return make_op({c, r}, std::move(out), {a}, [pa, r, c](Node& self) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) pa->scratch[i * c + j] += self.scratch[j * r + i];
    });
}

Tensor add_rowvec(const Tensor& x, const Tensor& v) {
    require(x.shape().size() == 2 && v.shape().size() == 1, "add_rowvec: expects [R,C] and [C]");
    const std::size_t r = x.shape()[0], c = x.shape()[1];
    require(v.shape()[0] == c, "add_rowvec: row vector length mismatch");
    std::vector<double> out(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] = x.data()[i * c + j] + v.data()[j];
    auto px = x.node(), pv = v.node();
    return make_op({r, c}, std::move(out), {x, v}, [px, pv, r, c](Node& self) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                px->scratch[i * c + j] += self.scratch[i * c + j];
                pv->scratch[j] += self.scratch[i * c + j];
            }
    });
}

Tensor linear(const Tensor& x, const Tensor& W, const Tensor& b) {
    if (x.shape().size() == 1) {
        Tensor x2 = reshape(x, {1, x.shape()[0]});
        Tensor y = add_rowvec(matmul(x2, W), b);
        return reshape(y, {y.shape()[1]});
    }
    return add_rowvec(matmul(x, W), b);
}

Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t count) {
    require(x.shape().size() == 2, "slice_cols: expects a 2-D tensor");
    const std::size_t r = x.shape()[0], c = x.shape()[1];
    require(start + count <= c, "slice_cols: slice out of range");
    std::vector<double> out(r * count);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < count; ++j) out[i * count + j] = x.data()[i * c + start + j];
    auto px = x.node();
    return make_op({r, count}, std::move(out), {x}, [px, r, c, start, count](Node& self) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < count; ++j)
                px->scratch[i * c + start + j] += self.scratch[i * count + j];
    });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "concat_cols: empty input");
    const std::size_t r = parts[0].shape()[0];
    std::size_t total = 0;
    for (const Tensor& p : parts) {
        require(p.shape().size() == 2 && p.shape()[0] == r, "concat_cols: row count mismatch");
        total += p.shape()[1];
    }
    std::vector<double> out(r * total);
    std::size_t off = 0;
    for (const Tensor& p : parts) {
        const std::size_t c = p.shape()[1];
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) out[i * total + off + j] = p.data()[i * c + j];
        off += c;
    }
    std::vector<std::shared_ptr<detail::Node>> pn;
    std::vector<std::size_t> widths;
    for (const Tensor& p : parts) {
        pn.push_back(p.node());
        widths.push_back(p.shape()[1]);
    }
    return make_op({r, total}, std::move(out), parts, [pn, widths, r, total](Node& self) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < pn.size(); ++k) {
            const std::size_t c = widths[k];
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    pn[k]->scratch[i * c + j] += self.scratch[i * total + off + j];
            off += c;
        }
    });
}

Tensor reshape(const Tensor& x, std::vector<std::size_t> shape) {
    require(shape_numel(shape) == x.size(), "reshape: element count mismatch");
    auto px = x.node();
    return make_op(std::move(shape), x.data(), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) px->scratch[i] += self.scratch[i];
    });
}

Tensor gather(const Tensor& x, const std::vector<std::size_t>& idx) {
    require(x.shape().size() == 1, "gather: expects a 1-D tensor");
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        require(idx[i] < x.size(), "gather: index out of range");
        out[i] = x.data()[idx[i]];
    }
    auto px = x.node();
    return make_op({idx.size()}, std::move(out), {x}, [px, idx](Node& self) {
        for (std::size_t i = 0; i < idx.size(); ++i) px->scratch[idx[i]] += self.scratch[i];
    });
}

Tensor relu(const Tensor& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] > 0.0 ? x.data()[i] : 0.0;
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            if (px->data[i] > 0.0) px->scratch[i] += self.scratch[i];
    });
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;
}  // namespace

Tensor gelu(const Tensor& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = x.data()[i];
        out[i] = 0.5 * v * (1.0 + std::tanh(kGeluC * (v + kGeluA * v * v * v)));
    }
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            const double v = px->data[i];
            const double th = std::tanh(kGeluC * (v + kGeluA * v * v * v));
            const double d =
                0.5 * (1.0 + th) + 0.5 * v * (1.0 - th * th) * kGeluC * (1.0 + 3.0 * kGeluA * v * v);
            px->scratch[i] += self.scratch[i] * d;
        }
    });
}

Tensor sigmoid(const Tensor& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = x.data()[i];
        out[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    }
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            const double v = px->data[i];
            const double s = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
            px->scratch[i] += self.scratch[i] * s * (1.0 - s);
        }
    });
}

Tensor log(const Tensor& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(x.data()[i]);
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            px->scratch[i] += self.scratch[i] / px->data[i];
    });
}

Tensor log_sigmoid(const Tensor& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = x.data()[i];
        out[i] = v >= 0.0 ? -std::log1p(std::exp(-v)) : v - std::log1p(std::exp(v));
    }
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            const double v = px->data[i];
            // d/dx log(sigmoid(x)) = sigmoid(-x)
            const double s =
                v >= 0.0 ? std::exp(-v) / (1.0 + std::exp(-v)) : 1.0 / (1.0 + std::exp(v));
            px->scratch[i] += self.scratch[i] * s;
        }
    });
}

Tensor clamp(const Tensor& x, double lo, double hi) {
    require(lo <= hi, "clamp: lo > hi");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::min(std::max(x.data()[i], lo), hi);
    auto px = x.node();
    return make_op(x.shape(), std::move(out), {x}, [px, lo, hi](Node& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            if (px->data[i] >= lo && px->data[i] <= hi) px->scratch[i] += self.scratch[i];
    });
}

Tensor softmax_rows(const Tensor& x) {
    require(x.shape().size() == 2, "softmax_rows: expects a 2-D tensor");
    const std::size_t r = x.shape()[0], c = x.shape()[1];
    std::vector<double> out(r * c);
    for (std::size_t i = 0; i < r; ++i) {
        const double* row = x.data().data() + i * c;
        double mx = row[0];
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            out[i * c + j] = std::exp(row[j] - mx);
            sum += out[i * c + j];
        }
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] /= sum;
    }
    auto px = x.node();
    std::vector<double> y = out;  // softmax values needed in backward
    return make_op({r, c}, std::move(out), {x}, [px, y, r, c](Node& self) {
        for (std::size_t i = 0; i < r; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < c; ++j) dot += self.scratch[i * c + j] * y[i * c + j];
            for (std::size_t j = 0; j < c; ++j)
                px->scratch[i * c + j] += y[i * c + j] * (self.scratch[i * c + j] - dot);
        }
    });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
    require(x.shape().size() == 2, "layer_norm: expects a 2-D tensor");
    const std::size_t r = x.shape()[0], c = x.shape()[1];
    require(c >= 2, "layer_norm: needs at least 2 features per row");
    require(gain.shape() == std::vector<std::size_t>{c} && bias.shape() == std::vector<std::size_t>{c},
            "layer_norm: gain/bias must have length cols");
    std::vector<double> xhat(r * c), inv_s(r), out(r * c);
    for (std::size_t i = 0; i < r; ++i) {
        const double* row = x.data().data() + i * c;
        double mu = 0.0;
        for (std::size_t j = 0; j < c; ++j) mu += row[j];
        mu /= double(c);
        double var = 0.0;
        for (std::size_t j = 0; j < c; ++j) var += (row[j] - mu) * (row[j] - mu);
        var /= double(c);
        const double is = 1.0 / std::sqrt(var + eps);
        inv_s[i] = is;
        for (std::size_t j = 0; j < c; ++j) {
            xhat[i * c + j] = (row[j] - mu) * is;
            out[i * c + j] = xhat[i * c + j] * gain.data()[j] + bias.data()[j];
        }
    }
    auto px = x.node(), pg = gain.node(), pb = bias.node();
    return make_op({r, c}, std::move(out), {x, gain, bias},
                   [px, pg, pb, xhat, inv_s, r, c](Node& self) {
                       for (std::size_t i = 0; i < r; ++i) {
                           double m1 = 0.0, m2 = 0.0;
                           for (std::size_t j = 0; j < c; ++j) {
                               const double dyh = self.scratch[i * c + j] * pg->data[j];
                               m1 += dyh;
                               m2 += dyh * xhat[i * c + j];
                           }
                           m1 /= double(c);
                           m2 /= double(c);
                           for (std::size_t j = 0; j < c; ++j) {
                               const double dyh = self.scratch[i * c + j] * pg->data[j];
                               px->scratch[i * c + j] +=
                                   inv_s[i] * (dyh - m1 - xhat[i * c + j] * m2);
                               pg->scratch[j] += self.scratch[i * c + j] * xhat[i * c + j];
                               pb->scratch[j] += self.scratch[i * c + j];
                           }
                       }
                   });
}

Tensor sum_all(const Tensor& x) {
    double s = 0.0;
    for (double v : x.data()) s += v;
    auto px = x.node();
    return make_op({1}, {s}, {x}, [px](Node& self) {
        for (std::size_t i = 0; i < px->size(); ++i) px->scratch[i] += self.scratch[0];
    });
}

Tensor mean_all(const Tensor& x) {
    double s = 0.0;
    for (double v : x.data()) s += v;
    const double inv = 1.0 / double(x.size());
    auto px = x.node();
    return make_op({1}, {s * inv}, {x}, [px, inv](Node& self) {
        for (std::size_t i = 0; i < px->size(); ++i) px->scratch[i] += self.scratch[0] * inv;
    });
}

}  // namespace tgs
