#pragma once

#include <vector>

#include "tgs/ops.hpp"
#include "tgs/signal.hpp"
#include "tgs/tensor.hpp"

namespace tgs {

// Losses are scalar tensors; gradients flow to the input logit tensors
// through backward(). Raw model outputs entering the top-k terms are
// pre-sigmoid logits. The naming convention is semantic: the abnormal term
// pushes the top-k snippets of abnormal videos towards 1, the normal term
// pushes the top-k snippets of normal videos towards 0.
struct BagScores {
    std::vector<Tensor> abnormal;  // per-video logit tensors, label 1
    std::vector<Tensor> normal;    // per-video logit tensors, label 0
    std::size_t k = 1;
};

// Indices of the k largest entries, ties broken by lower index.
std::vector<std::size_t> topk_indices(const std::vector<double>& values, std::size_t k);

// -(1/N) sum_videos (1/k) sum_topk log(sigmoid(logit))
Tensor topk_abnormal_term(const std::vector<Tensor>& logits_per_video, std::size_t k);

// -(1/N) sum_videos (1/k) sum_topk log(1 - sigmoid(logit))
Tensor topk_normal_term(const std::vector<Tensor>& logits_per_video, std::size_t k);

constexpr double kBceEps = 1e-7;

// Mean over snippets of -[t log p + (1-t) log(1-p)] with p clamped to
// [eps, 1-eps]. Predictions are probabilities.
Tensor bce(const Tensor& pred_probs, const std::vector<double>& targets);

// topk_normal_term(norm_logits, k) + bce(abn_pred, pseudo)
Tensor tgs_loss(const Tensor& abn_pred_probs, const PseudoLabel& pseudo,
                const std::vector<Tensor>& norm_logits, std::size_t k);

// Temporal smoothness sum_t (s_t - s_{t+1})^2 and sparsity sum_t s_t, each
// scaled by its coefficient.
Tensor smoothness(const Tensor& scores, double coeff = 8e-4);
Tensor sparsity(const Tensor& scores, double coeff = 8e-3);

}  // namespace tgs
