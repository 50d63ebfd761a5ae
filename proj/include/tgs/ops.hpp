#pragma once

#include <vector>

#include "tgs/tensor.hpp"

namespace tgs {

// Elementwise; shapes must match exactly.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);

// 2-D matrix product [m,k]x[k,n] -> [m,n].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// x: [R,C] plus a length-C row vector added to every row.
Tensor add_rowvec(const Tensor& x, const Tensor& v);

// Affine map x W + b. x may be [T,in] or [in].
Tensor linear(const Tensor& x, const Tensor& W, const Tensor& b);

Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t count);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor reshape(const Tensor& x, std::vector<std::size_t> shape);

// y_i = x[idx_i]; x must be 1-D. Gradient scatter-adds.
Tensor gather(const Tensor& x, const std::vector<std::size_t>& idx);

Tensor relu(const Tensor& x);
// tanh approximation with the 0.044715 cubic term.
Tensor gelu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor log(const Tensor& x);
// Numerically stable log(sigmoid(x)).
Tensor log_sigmoid(const Tensor& x);
Tensor clamp(const Tensor& x, double lo, double hi);

// Row-wise softmax over the last dimension of a 2-D tensor.
Tensor softmax_rows(const Tensor& x);

// Per-row standardization (population variance, eps inside the sqrt) followed
// by the affine map with gain/bias of length cols.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);

}  // namespace tgs
