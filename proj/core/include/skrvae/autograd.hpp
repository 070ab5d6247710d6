#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "skrvae/tensor.hpp"

namespace skr::autodiff {

enum class Reduce { Sum, Mean };

// Axis::Rows collapses the row dimension (result 1xC);
// Axis::Cols collapses the column dimension (result Rx1).
enum class Axis { All, Rows, Cols };

class Tape;

// One node of the define-by-run graph. Owned by its Tape; handles stay valid
// until the tape is destroyed or cleared.
class Node {
public:
    const Tensor& value() const noexcept { return value_; }
    Tensor& value() noexcept { return value_; }
    const Tensor& grad() const noexcept { return grad_; }
    Tensor& grad() noexcept { return grad_; }
    bool requires_grad() const noexcept { return requires_grad_; }

private:
    friend class Tape;
    Tensor value_;
    Tensor grad_; // same shape as value_ when requires_grad_
    bool requires_grad_ = false;
    std::vector<Node*> parents_;
    std::function<void(Node&)> backprop_; // accumulates into parents' grads
};

using Value = Node*;

// Define-by-run tape, rebuilt every training step. Single-threaded: a tape
// and its nodes are confined to the thread that built them.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Value leaf(Tensor value, bool requires_grad = false);
    Value constant(Tensor value) { return leaf(std::move(value), false); }
    Value constant(double v) { return leaf(Tensor::scalar(v), false); }

    // Registers a node with an externally supplied backward rule. The closure
    // receives the finished node and must accumulate into parents' grads.
    Value custom(Tensor value, std::vector<Value> parents, std::function<void(Node&)> backprop);

    Value matmul(Value a, Value b);

    // Binary elementwise; operands may also be scalar (1x1), a row vector
    // (1xC) broadcast down rows, or a column vector (Rx1) broadcast across
    // columns of the other operand.
    Value add(Value a, Value b);
    Value sub(Value a, Value b);
    Value mul(Value a, Value b);
    Value div(Value a, Value b);

    Value exp(Value x);
    Value ln(Value x);
    Value tanh(Value x);
    Value square(Value x);
    Value neg(Value x);

    Value reduce(Reduce kind, Value x, Axis axis = Axis::All);
    Value sum(Value x) { return reduce(Reduce::Sum, x); }
    Value mean(Value x) { return reduce(Reduce::Mean, x); }

    Value scale(Value x, double k) { return mul(x, constant(k)); }

    // Reverse sweep from a scalar root. Each reachable node is visited once;
    // calling again without reset() is an error.
    void backward(Value root);

    // Zeroes every gradient and re-arms backward().
    void reset();

    std::size_t size() const noexcept { return nodes_.size(); }
    void clear();

private:
    Value make_node(Tensor value, std::vector<Node*> parents, std::function<void(Node&)> backprop);

    std::vector<std::unique_ptr<Node>> nodes_;
    bool backward_done_ = false;
};

// Named trainable tensors. Spreads and variances are stored as logarithms by
// their owners so the exponentials stay strictly positive.
class ParameterStore {
public:
    Tensor& add(const std::string& name, Tensor init);
    bool contains(const std::string& name) const;
    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Tensor> values_;
};

// Per-step leaf bindings of a ParameterStore on some tape.
class StagedParams {
public:
    Value at(const std::string& name) const;
    const Tensor& grad(const std::string& name) const { return at(name)->grad(); }

private:
    friend StagedParams stage(Tape&, const ParameterStore&);
    std::unordered_map<std::string, Value> leaves_;
};

StagedParams stage(Tape& tape, const ParameterStore& params);

// Max over all parameters of |analytic - central difference| / max(1, |cd|)
// for a scalar function built on a fresh tape from staged parameters.
using BuildFn = std::function<Value(Tape&, const StagedParams&)>;
double grad_check(const BuildFn& build, const ParameterStore& params, double eps);

} // namespace skr::autodiff
