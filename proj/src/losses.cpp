#include "tgs/losses.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tgs {

std::vector<std::size_t> topk_indices(const std::vector<double>& values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (values[a] != values[b]) return values[a] > values[b];
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

namespace {

Tensor topk_term(const std::vector<Tensor>& logits_per_video, std::size_t k, bool flip_sign) {
    if (logits_per_video.empty())
        throw std::invalid_argument("topk loss: needs at least one video");
    if (k == 0) throw std::invalid_argument("topk loss: k must be at least 1");
    Tensor total = Tensor::scalar(0.0);
    for (const Tensor& logits : logits_per_video) {
        if (logits.shape().size() != 1)
            throw std::invalid_argument("topk loss: per-video logits must be 1-D");
        if (k > logits.size())
            throw std::invalid_argument("topk loss: k exceeds video length");
        const std::vector<std::size_t> idx = topk_indices(logits.data(), k);
        const Tensor selected = gather(logits, idx);
        // log sigmoid(x) for the abnormal term, log(1 - sigmoid(x)) for the
        // normal term; the latter equals log sigmoid(-x).
        const Tensor logp = flip_sign ? log_sigmoid(mul_scalar(selected, -1.0))
                                      : log_sigmoid(selected);
        total = add(total, mean_all(logp));
    }
    return mul_scalar(total, -1.0 / double(logits_per_video.size()));
}

}  // namespace

Tensor topk_abnormal_term(const std::vector<Tensor>& logits_per_video, std::size_t k) {
    return topk_term(logits_per_video, k, /*flip_sign=*/false);
}

Tensor topk_normal_term(const std::vector<Tensor>& logits_per_video, std::size_t k) {
    return topk_term(logits_per_video, k, /*flip_sign=*/true);
}

Tensor bce(const Tensor& pred_probs, const std::vector<double>& targets) {
    if (pred_probs.shape().size() != 1)
        throw std::invalid_argument("bce: predictions must be 1-D");
    if (pred_probs.size() != targets.size())
        throw std::invalid_argument("bce: prediction/target length mismatch");
    const std::size_t n = targets.size();
    const Tensor p = clamp(pred_probs, kBceEps, 1.0 - kBceEps);
    const Tensor t = Tensor::from({n}, targets);
    std::vector<double> ones(n, 1.0);
    const Tensor one = Tensor::from({n}, ones);
    const Tensor pos = mul(t, log(p));
    const Tensor neg = mul(sub(one, t), log(sub(one, p)));
    return mul_scalar(mean_all(add(pos, neg)), -1.0);
}

Tensor tgs_loss(const Tensor& abn_pred_probs, const PseudoLabel& pseudo,
                const std::vector<Tensor>& norm_logits, std::size_t k) {
    return add(topk_normal_term(norm_logits, k), bce(abn_pred_probs, pseudo.targets));
}

Tensor smoothness(const Tensor& scores, double coeff) {
    if (scores.shape().size() != 1 || scores.size() < 2)
        throw std::invalid_argument("smoothness: needs a 1-D series of length >= 2");
    const std::size_t n = scores.size();
    std::vector<std::size_t> head(n - 1), tail(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        head[i] = i;
        tail[i] = i + 1;
    }
    const Tensor diff = sub(gather(scores, head), gather(scores, tail));
    return mul_scalar(sum_all(mul(diff, diff)), coeff);
}

Tensor sparsity(const Tensor& scores, double coeff) {
    if (scores.shape().size() != 1)
        throw std::invalid_argument("sparsity: needs a 1-D series");
    return mul_scalar(sum_all(scores), coeff);
}

}  // namespace tgs
