#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tgs/rng.hpp"

namespace tgs {

class Tensor;

namespace detail {

struct Node {
    std::vector<std::size_t> shape;
    std::vector<double> data;
    bool requires_grad = false;
    std::vector<double> grad;     // persistent; allocated iff requires_grad
    std::vector<double> scratch;  // per-backward-pass accumulator

    std::vector<std::shared_ptr<Node>> parents;
    // Propagates this node's scratch gradient into the parents' scratch buffers.
    std::function<void(Node&)> backward_fn;

    std::size_t size() const { return data.size(); }
};

}  // namespace detail

// Dense row-major double tensor with reverse-mode differentiation. Tensors are
// cheap handles onto shared nodes; ops build a graph and backward() runs it.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape);
    static Tensor full(std::vector<std::size_t> shape, double value);
    static Tensor from(std::vector<std::size_t> shape, std::vector<double> data);
    static Tensor scalar(double value);
    static Tensor uniform(std::vector<std::size_t> shape, double lo, double hi, Rng& rng);

    bool defined() const { return n_ != nullptr; }
    const std::vector<std::size_t>& shape() const { return n_->shape; }
    std::size_t size() const { return n_->data.size(); }
    std::size_t rows() const;
    std::size_t cols() const;

    const std::vector<double>& data() const { return n_->data; }
    std::vector<double>& data() { return n_->data; }

    bool requires_grad() const { return n_->requires_grad; }
    Tensor& set_requires_grad(bool flag);

    const std::vector<double>& grad() const { return n_->grad; }
    std::vector<double>& grad() { return n_->grad; }
    void zero_grad();

    // Scalar value of a 1-element tensor.
    double value() const;

    // Reverse pass from a scalar root. Gradients accumulate (add) into the
    // grad buffers of every reachable requires_grad node.
    void backward();

    // Deep copy of values only; the copy is a leaf.
    Tensor detached_copy() const;

    std::shared_ptr<detail::Node> node() const { return n_; }

private:
    friend Tensor make_op(std::vector<std::size_t> shape, std::vector<double> data,
                          std::vector<Tensor> parents, std::function<void(detail::Node&)> backward);
    std::shared_ptr<detail::Node> n_;
};

// Builds a graph node. If no parent requires grad the parents and backward
// closure are dropped, so inference graphs stay flat.
Tensor make_op(std::vector<std::size_t> shape, std::vector<double> data,
               std::vector<Tensor> parents, std::function<void(detail::Node&)> backward);

std::size_t shape_numel(const std::vector<std::size_t>& shape);
std::string shape_str(const std::vector<std::size_t>& shape);

}  // namespace tgs
