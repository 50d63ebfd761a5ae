#include "tgs/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace tgs {

Linear Linear::init(std::size_t in, std::size_t out, Rng& rng) {
    const double bound = 1.0 / std::sqrt(double(in));
    Linear l;
    l.W = Tensor::uniform({in, out}, -bound, bound, rng).set_requires_grad(true);
    l.b = Tensor::uniform({out}, -bound, bound, rng).set_requires_grad(true);
    return l;
}

void Linear::collect(const std::string& prefix, ParamList& out) const {
    out.emplace_back(prefix + ".W", W);
    out.emplace_back(prefix + ".b", b);
}

LayerNormParams LayerNormParams::init(std::size_t dim) {
    LayerNormParams p;
    p.gain = Tensor::full({dim}, 1.0).set_requires_grad(true);
    p.bias = Tensor::zeros({dim}).set_requires_grad(true);
    return p;
}

void LayerNormParams::collect(const std::string& prefix, ParamList& out) const {
    out.emplace_back(prefix + ".gain", gain);
    out.emplace_back(prefix + ".bias", bias);
}

MultiHeadAttention MultiHeadAttention::init(std::size_t dim, std::size_t heads, Rng& rng) {
    if (heads == 0 || dim % heads != 0)
        throw std::invalid_argument("attention: model width must be divisible by head count");
    MultiHeadAttention a;
    a.heads = heads;
    a.wq = Linear::init(dim, dim, rng);
    a.wk = Linear::init(dim, dim, rng);
    a.wv = Linear::init(dim, dim, rng);
    a.wo = Linear::init(dim, dim, rng);
    return a;
}

Tensor MultiHeadAttention::forward(const Tensor& q_src, const Tensor& kv_src) const {
    if (q_src.shape().size() != 2 || kv_src.shape().size() != 2)
        throw std::invalid_argument("attention: expects 2-D inputs");
    const std::size_t d = wq.W.shape()[0];
    if (q_src.shape()[1] != d || kv_src.shape()[1] != d)
        throw std::invalid_argument("attention: input width mismatch");

    const Tensor q = wq.forward(q_src);
    const Tensor k = wk.forward(kv_src);
    const Tensor v = wv.forward(kv_src);

    const std::size_t dh = d / heads;
    const double scale = 1.0 / std::sqrt(double(dh));
    std::vector<Tensor> head_outs;
    head_outs.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        const Tensor qh = slice_cols(q, h * dh, dh);
        const Tensor kh = slice_cols(k, h * dh, dh);
        const Tensor vh = slice_cols(v, h * dh, dh);
        const Tensor attn = softmax_rows(mul_scalar(matmul(qh, transpose(kh)), scale));
        head_outs.push_back(matmul(attn, vh));
    }
    return wo.forward(concat_cols(head_outs));
}

void MultiHeadAttention::collect(const std::string& prefix, ParamList& out) const {
    wq.collect(prefix + ".wq", out);
    wk.collect(prefix + ".wk", out);
    wv.collect(prefix + ".wv", out);
    wo.collect(prefix + ".wo", out);
}

TransformerBlock TransformerBlock::init(std::size_t dim, std::size_t heads, Rng& rng) {
    TransformerBlock b;
    b.ln1 = LayerNormParams::init(dim);
    b.attn = MultiHeadAttention::init(dim, heads, rng);
    b.ln2 = LayerNormParams::init(dim);
    b.fc1 = Linear::init(dim, dim / 2, rng);
    b.fc2 = Linear::init(dim / 2, dim, rng);
    return b;
}

Tensor TransformerBlock::forward(const Tensor& x) const {
    const Tensor normed = ln1.forward(x);
    const Tensor attended = add(x, attn.forward(normed, normed));
    const Tensor mlp = fc2.forward(relu(fc1.forward(ln2.forward(attended))));
    return add(attended, mlp);
}

void TransformerBlock::collect(const std::string& prefix, ParamList& out) const {
    ln1.collect(prefix + ".ln1", out);
    attn.collect(prefix + ".attn", out);
    ln2.collect(prefix + ".ln2", out);
    fc1.collect(prefix + ".fc1", out);
    fc2.collect(prefix + ".fc2", out);
}

ScoreMlp ScoreMlp::init(std::size_t dim, Rng& rng) {
    if (dim < 16) throw std::invalid_argument("score mlp: model width must be at least 16");
    ScoreMlp m;
    m.l1 = Linear::init(dim, dim / 4, rng);
    m.l2 = Linear::init(dim / 4, dim / 8, rng);
    m.l3 = Linear::init(dim / 8, dim / 16, rng);
    m.l4 = Linear::init(dim / 16, 1, rng);
    return m;
}

Tensor ScoreMlp::forward(const Tensor& x) const {
    return l4.forward(gelu(l3.forward(l2.forward(l1.forward(x)))));
}

void ScoreMlp::collect(const std::string& prefix, ParamList& out) const {
    l1.collect(prefix + ".l1", out);
    l2.collect(prefix + ".l2", out);
    l3.collect(prefix + ".l3", out);
    l4.collect(prefix + ".l4", out);
}

}  // namespace tgs
