#include "tgs/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tgs {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << "]";
    return os.str();
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
    return full(std::move(shape), 0.0);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
    std::vector<double> data(shape_numel(shape), value);
    return from(std::move(shape), std::move(data));
}

Tensor Tensor::from(std::vector<std::size_t> shape, std::vector<double> data) {
    if (shape_numel(shape) != data.size())
        throw std::invalid_argument("tensor: data length " + std::to_string(data.size()) +
                                    " does not match shape " + shape_str(shape));
    Tensor t;
    t.n_ = std::make_shared<detail::Node>();
    t.n_->shape = std::move(shape);
    t.n_->data = std::move(data);
    return t;
}

Tensor Tensor::scalar(double value) {
    return from({1}, {value});
}

Tensor Tensor::uniform(std::vector<std::size_t> shape, double lo, double hi, Rng& rng) {
    std::vector<double> data(shape_numel(shape));
    for (double& v : data) v = rng.uniform(lo, hi);
    return from(std::move(shape), std::move(data));
}

std::size_t Tensor::rows() const {
    return n_->shape.empty() ? 1 : n_->shape[0];
}

std::size_t Tensor::cols() const {
    if (n_->shape.size() < 2) return 1;
    std::size_t c = 1;
    for (std::size_t i = 1; i < n_->shape.size(); ++i) c *= n_->shape[i];
    return c;
}

Tensor& Tensor::set_requires_grad(bool flag) {
    n_->requires_grad = flag;
    if (flag)
        n_->grad.assign(n_->data.size(), 0.0);
    else
        n_->grad.clear();
    return *this;
}

void Tensor::zero_grad() {
    std::fill(n_->grad.begin(), n_->grad.end(), 0.0);
}

double Tensor::value() const {
    if (size() != 1) throw std::invalid_argument("tensor: value() requires a 1-element tensor");
    return n_->data[0];
}

Tensor Tensor::detached_copy() const {
    return Tensor::from(n_->shape, n_->data);
}

Tensor make_op(std::vector<std::size_t> shape, std::vector<double> data,
               std::vector<Tensor> parents, std::function<void(detail::Node&)> backward) {
    bool needs_grad = false;
    for (const Tensor& p : parents)
        if (p.requires_grad() || p.node()->backward_fn) needs_grad = true;
    Tensor t = Tensor::from(std::move(shape), std::move(data));
    if (needs_grad) {
        auto n = t.node();
        n->parents.reserve(parents.size());
        for (Tensor& p : parents) n->parents.push_back(p.node());
        n->backward_fn = std::move(backward);
    }
    return t;
}

void Tensor::backward() {
    if (size() != 1) throw std::invalid_argument("tensor: backward() requires a scalar root");

    // Iterative post-order DFS: children appear before parents in `topo`.
    std::vector<detail::Node*> topo;
    std::unordered_set<detail::Node*> seen;
    struct Frame {
        detail::Node* node;
        std::size_t next_parent;
    };
    std::vector<Frame> stack;
    if (seen.insert(n_.get()).second) stack.push_back({n_.get(), 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_parent < f.node->parents.size()) {
            detail::Node* p = f.node->parents[f.next_parent++].get();
            if (seen.insert(p).second) stack.push_back({p, 0});
        } else {
            topo.push_back(f.node);
            stack.pop_back();
        }
    }

    for (detail::Node* n : topo) n->scratch.assign(n->size(), 0.0);
    n_->scratch[0] = 1.0;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
        if ((*it)->backward_fn) (*it)->backward_fn(**it);
    for (detail::Node* n : topo) {
        if (n->requires_grad) {
            if (n->grad.size() != n->size()) n->grad.assign(n->size(), 0.0);
            for (std::size_t i = 0; i < n->size(); ++i) n->grad[i] += n->scratch[i];
        }
        n->scratch.clear();
    }
}

}  // namespace tgs
