#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tgs/ops.hpp"
#include "tgs/tensor.hpp"

namespace tgs {

// Ordered (name, parameter) pairs; ordering is the declaration/collection
// order and is what the optimizer and checkpoints iterate over.
using ParamList = std::vector<std::pair<std::string, Tensor>>;

struct Linear {
    Tensor W;  // [in, out]
    Tensor b;  // [out]

    static Linear init(std::size_t in, std::size_t out, Rng& rng);
    Tensor forward(const Tensor& x) const { return linear(x, W, b); }
    void collect(const std::string& prefix, ParamList& out) const;
};

struct LayerNormParams {
    Tensor gain;
    Tensor bias;

    static LayerNormParams init(std::size_t dim);
    Tensor forward(const Tensor& x) const { return layer_norm(x, gain, bias); }
    void collect(const std::string& prefix, ParamList& out) const;
};

// Scaled dot-product attention with H heads and an output projection.
// Queries come from q_src, keys and values from kv_src. No positional
// embeddings and no class token.
struct MultiHeadAttention {
    std::size_t heads = 1;
    Linear wq, wk, wv, wo;

    static MultiHeadAttention init(std::size_t dim, std::size_t heads, Rng& rng);
    Tensor forward(const Tensor& q_src, const Tensor& kv_src) const;
    void collect(const std::string& prefix, ParamList& out) const;
};

// Pre-norm block: LN -> self-attention -> residual, LN -> (d -> d/2, ReLU,
// d/2 -> d) -> residual.
struct TransformerBlock {
    LayerNormParams ln1, ln2;
    MultiHeadAttention attn;
    Linear fc1, fc2;

    static TransformerBlock init(std::size_t dim, std::size_t heads, Rng& rng);
    Tensor forward(const Tensor& x) const;
    void collect(const std::string& prefix, ParamList& out) const;
};

// Four-layer score head d -> d/4 -> d/8 -> d/16 -> 1 with a GELU between the
// last two layers. Returns pre-sigmoid logits of shape [T,1].
struct ScoreMlp {
    Linear l1, l2, l3, l4;

    static ScoreMlp init(std::size_t dim, Rng& rng);
    Tensor forward(const Tensor& x) const;
    void collect(const std::string& prefix, ParamList& out) const;
};

}  // namespace tgs
