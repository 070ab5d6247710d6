#include "skrvae/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include <Eigen/Core>

namespace skr::autodiff {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap as_eigen(const Tensor& t) {
    return ECMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                 static_cast<Eigen::Index>(t.cols()));
}

EMap as_eigen(Tensor& t) {
    return EMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                static_cast<Eigen::Index>(t.cols()));
}

// How a binary operand maps onto the output grid.
enum class Bcast { Same, Scalar, Row, Col };

struct BinPlan {
    std::size_t rows, cols;
    Bcast a, b;
};

Bcast classify(const Tensor& t, std::size_t rows, std::size_t cols, const char* op) {
    if (t.rows() == rows && t.cols() == cols) return Bcast::Same;
    if (t.is_scalar()) return Bcast::Scalar;
    if (t.rows() == 1 && t.cols() == cols) return Bcast::Row;
    if (t.cols() == 1 && t.rows() == rows) return Bcast::Col;
    throw DimensionError(std::string(op) + ": shape mismatch " + t.shape_str() + " vs (" +
                         std::to_string(rows) + "x" + std::to_string(cols) + ")");
}

BinPlan plan_binary(const Tensor& a, const Tensor& b, const char* op) {
    const std::size_t rows = std::max(a.rows(), b.rows());
    const std::size_t cols = std::max(a.cols(), b.cols());
    return {rows, cols, classify(a, rows, cols, op), classify(b, rows, cols, op)};
}

inline std::size_t map_index(Bcast k, std::size_t r, std::size_t c, std::size_t cols) {
    switch (k) {
    case Bcast::Same: return r * cols + c;
    case Bcast::Scalar: return 0;
    case Bcast::Row: return c;
    case Bcast::Col: return r;
    }
    return 0;
}

// Denominator magnitude floor for division gradients; forward division has
// already rejected exact zeros.
inline double clamp_denom(double d) {
    return std::abs(d) < 1e-12 ? std::copysign(1e-12, d) : d;
}

} // namespace

Value Tape::make_node(Tensor value, std::vector<Node*> parents,
                      std::function<void(Node&)> backprop) {
    auto node = std::make_unique<Node>();
    node->value_ = std::move(value);
    node->parents_ = std::move(parents);
    for (Node* p : node->parents_)
        if (p->requires_grad_) node->requires_grad_ = true;
    if (node->requires_grad_) {
        node->grad_ = Tensor(node->value_.rows(), node->value_.cols());
        node->backprop_ = std::move(backprop);
    }
    nodes_.push_back(std::move(node));
    return nodes_.back().get();
}

Value Tape::leaf(Tensor value, bool requires_grad) {
    auto node = std::make_unique<Node>();
    node->value_ = std::move(value);
    node->requires_grad_ = requires_grad;
    if (requires_grad) node->grad_ = Tensor(node->value_.rows(), node->value_.cols());
    nodes_.push_back(std::move(node));
    return nodes_.back().get();
}

Value Tape::custom(Tensor value, std::vector<Value> parents,
                   std::function<void(Node&)> backprop) {
    return make_node(std::move(value), std::move(parents), std::move(backprop));
}

Value Tape::matmul(Value a, Value b) {
    const Tensor& av = a->value();
    const Tensor& bv = b->value();
    if (av.cols() != bv.rows())
        throw DimensionError("matmul: inner dimensions disagree " + av.shape_str() + " vs " +
                             bv.shape_str());
    Tensor out(av.rows(), bv.cols());
    as_eigen(out).noalias() = as_eigen(av) * as_eigen(bv);
    return make_node(std::move(out), {a, b}, [a, b](Node& n) {
        const auto g = as_eigen(n.grad());
        if (a->requires_grad()) as_eigen(a->grad()).noalias() += g * as_eigen(b->value()).transpose();
        if (b->requires_grad()) as_eigen(b->grad()).noalias() += as_eigen(a->value()).transpose() * g;
    });
}

Value Tape::add(Value a, Value b) {
    const BinPlan p = plan_binary(a->value(), b->value(), "add");
    Tensor out(p.rows, p.cols);
    const Tensor& av = a->value();
    const Tensor& bv = b->value();
    for (std::size_t r = 0; r < p.rows; ++r)
        for (std::size_t c = 0; c < p.cols; ++c)
            out(r, c) = av[map_index(p.a, r, c, p.cols)] + bv[map_index(p.b, r, c, p.cols)];
    return make_node(std::move(out), {a, b}, [a, b, p](Node& n) {
        const Tensor& g = n.grad();
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) {
                const double gv = g(r, c);
                if (a->requires_grad()) a->grad()[map_index(p.a, r, c, p.cols)] += gv;
                if (b->requires_grad()) b->grad()[map_index(p.b, r, c, p.cols)] += gv;
            }
    });
}

Value Tape::sub(Value a, Value b) {
    const BinPlan p = plan_binary(a->value(), b->value(), "sub");
    Tensor out(p.rows, p.cols);
    const Tensor& av = a->value();
    const Tensor& bv = b->value();
    for (std::size_t r = 0; r < p.rows; ++r)
        for (std::size_t c = 0; c < p.cols; ++c)
            out(r, c) = av[map_index(p.a, r, c, p.cols)] - bv[map_index(p.b, r, c, p.cols)];
    return make_node(std::move(out), {a, b}, [a, b, p](Node& n) {
        const Tensor& g = n.grad();
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) {
                const double gv = g(r, c);
                if (a->requires_grad()) a->grad()[map_index(p.a, r, c, p.cols)] += gv;
                if (b->requires_grad()) b->grad()[map_index(p.b, r, c, p.cols)] -= gv;
            }
    });
}

Value Tape::mul(Value a, Value b) {
    const BinPlan p = plan_binary(a->value(), b->value(), "mul");
    Tensor out(p.rows, p.cols);
    const Tensor& av = a->value();
    const Tensor& bv = b->value();
    for (std::size_t r = 0; r < p.rows; ++r)
        for (std::size_t c = 0; c < p.cols; ++c)
            out(r, c) = av[map_index(p.a, r, c, p.cols)] * bv[map_index(p.b, r, c, p.cols)];
    return make_node(std::move(out), {a, b}, [a, b, p](Node& n) {
        const Tensor& g = n.grad();
        const Tensor& av = a->value();
        const Tensor& bv = b->value();
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) {
                const double gv = g(r, c);
                const std::size_t ia = map_index(p.a, r, c, p.cols);
                const std::size_t ib = map_index(p.b, r, c, p.cols);
                if (a->requires_grad()) a->grad()[ia] += gv * bv[ib];
                if (b->requires_grad()) b->grad()[ib] += gv * av[ia];
            }
    });
}

Value Tape::div(Value a, Value b) {
    const BinPlan p = plan_binary(a->value(), b->value(), "div");
    Tensor out(p.rows, p.cols);
    const Tensor& av = a->value();
    const Tensor& bv = b->value();
    for (std::size_t i = 0; i < bv.size(); ++i)
        if (bv[i] == 0.0) throw DomainError("div: zero denominator");
    for (std::size_t r = 0; r < p.rows; ++r)
        for (std::size_t c = 0; c < p.cols; ++c)
            out(r, c) = av[map_index(p.a, r, c, p.cols)] / bv[map_index(p.b, r, c, p.cols)];
    return make_node(std::move(out), {a, b}, [a, b, p](Node& n) {
        const Tensor& g = n.grad();
        const Tensor& av = a->value();
        const Tensor& bv = b->value();
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) {
                const double gv = g(r, c);
                const std::size_t ia = map_index(p.a, r, c, p.cols);
                const std::size_t ib = map_index(p.b, r, c, p.cols);
                const double d = clamp_denom(bv[ib]);
                if (a->requires_grad()) a->grad()[ia] += gv / d;
                if (b->requires_grad()) b->grad()[ib] -= gv * av[ia] / (d * d);
            }
    });
}

Value Tape::exp(Value x) {
    Tensor out(x->value().rows(), x->value().cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(x->value()[i]);
    return make_node(std::move(out), {x}, [x](Node& n) {
        if (!x->requires_grad()) return;
        for (std::size_t i = 0; i < n.grad().size(); ++i)
            x->grad()[i] += n.grad()[i] * n.value()[i];
    });
}

Value Tape::ln(Value x) {
    Tensor out(x->value().rows(), x->value().cols());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = x->value()[i];
        if (v <= 0.0) throw DomainError("ln: non-positive argument " + std::to_string(v));
        out[i] = std::log(v);
    }
    return make_node(std::move(out), {x}, [x](Node& n) {
        if (!x->requires_grad()) return;
        for (std::size_t i = 0; i < n.grad().size(); ++i)
            x->grad()[i] += n.grad()[i] / x->value()[i];
    });
}

Value Tape::tanh(Value x) {
    Tensor out(x->value().rows(), x->value().cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x->value()[i]);
    return make_node(std::move(out), {x}, [x](Node& n) {
        if (!x->requires_grad()) return;
        for (std::size_t i = 0; i < n.grad().size(); ++i) {
            const double t = n.value()[i];
            x->grad()[i] += n.grad()[i] * (1.0 - t * t);
        }
    });
}

Value Tape::square(Value x) {
    Tensor out(x->value().rows(), x->value().cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x->value()[i] * x->value()[i];
    return make_node(std::move(out), {x}, [x](Node& n) {
        if (!x->requires_grad()) return;
        for (std::size_t i = 0; i < n.grad().size(); ++i)
            x->grad()[i] += 2.0 * x->value()[i] * n.grad()[i];
    });
}

Value Tape::neg(Value x) {
    Tensor out(x->value().rows(), x->value().cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -x->value()[i];
    return make_node(std::move(out), {x}, [x](Node& n) {
        if (!x->requires_grad()) return;
        for (std::size_t i = 0; i < n.grad().size(); ++i) x->grad()[i] -= n.grad()[i];
    });
}

Value Tape::reduce(Reduce kind, Value x, Axis axis) {
    const Tensor& v = x->value();
    const std::size_t rows = v.rows(), cols = v.cols();
    std::size_t out_rows = 1, out_cols = 1;
    if (axis == Axis::Rows) out_cols = cols;
    if (axis == Axis::Cols) out_rows = rows;
    Tensor out(out_rows, out_cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t o = axis == Axis::All ? 0 : (axis == Axis::Rows ? c : r);
            out[o] += v(r, c);
        }
    const double denom = kind == Reduce::Mean
                             ? static_cast<double>(axis == Axis::All ? rows * cols
                                                   : axis == Axis::Rows ? rows
                                                                        : cols)
                             : 1.0;
    if (kind == Reduce::Mean)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] /= denom;
    return make_node(std::move(out), {x}, [x, axis, denom, rows, cols](Node& n) {
        if (!x->requires_grad()) return;
        const Tensor& g = n.grad();
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t o = axis == Axis::All ? 0 : (axis == Axis::Rows ? c : r);
                x->grad()(r, c) += g[o] / denom;
            }
    });
}

void Tape::backward(Value root) {
    if (backward_done_)
        throw ContractError("backward: tape already swept; call reset() first");
    if (!root->value().is_scalar())
        throw ContractError("backward: root must be scalar, got " + root->value().shape_str());
    backward_done_ = true;
    if (!root->requires_grad_) return;

    // Iterative post-order over grad-requiring ancestors.
    std::vector<Node*> order;
    order.reserve(nodes_.size());
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(root, 0);
    visited.insert(root);
    while (!stack.empty()) {
        Node* node = stack.back().first;
        const std::size_t next = stack.back().second;
        if (next < node->parents_.size()) {
            ++stack.back().second;
            Node* p = node->parents_[next];
            if (p->requires_grad_ && visited.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    root->grad_[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if ((*it)->backprop_) (*it)->backprop_(**it);
}

void Tape::reset() {
    for (auto& n : nodes_)
        if (n->requires_grad_) n->grad_.fill(0.0);
    backward_done_ = false;
}

void Tape::clear() {
    nodes_.clear();
    backward_done_ = false;
}

Tensor& ParameterStore::add(const std::string& name, Tensor init) {
    if (contains(name)) throw ContractError("ParameterStore: duplicate parameter " + name);
    names_.push_back(name);
    return values_.emplace(name, std::move(init)).first->second;
}

bool ParameterStore::contains(const std::string& name) const { return values_.count(name) > 0; }

Tensor& ParameterStore::at(const std::string& name) {
    auto it = values_.find(name);
    if (it == values_.end()) throw ContractError("ParameterStore: unknown parameter " + name);
    return it->second;
}

const Tensor& ParameterStore::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw ContractError("ParameterStore: unknown parameter " + name);
    return it->second;
}

Value StagedParams::at(const std::string& name) const {
    auto it = leaves_.find(name);
    if (it == leaves_.end()) throw ContractError("StagedParams: unknown parameter " + name);
    return it->second;
}

StagedParams stage(Tape& tape, const ParameterStore& params) {
    StagedParams staged;
    for (const auto& name : params.names())
        staged.leaves_.emplace(name, tape.leaf(params.at(name), true));
    return staged;
}

double grad_check(const BuildFn& build, const ParameterStore& params, double eps) {
    if (!(eps >= 1e-7 && eps <= 1e-3))
        throw ContractError("grad_check: eps must lie in [1e-7, 1e-3]");

    Tape tape;
    StagedParams staged = stage(tape, params);
    Value root = build(tape, staged);
    tape.backward(root);

    auto eval_at = [&](const ParameterStore& p) {
        Tape t;
        StagedParams s = stage(t, p);
        return build(t, s)->value()(0, 0);
    };

    double worst = 0.0;
    for (const auto& name : params.names()) {
        const Tensor& analytic = staged.grad(name);
        ParameterStore probe;
        for (const auto& n : params.names()) probe.add(n, params.at(n));
        Tensor& target = probe.at(name);
        for (std::size_t i = 0; i < target.size(); ++i) {
            const double keep = target[i];
            target[i] = keep + eps;
            const double fp = eval_at(probe);
            target[i] = keep - eps;
            const double fm = eval_at(probe);
            target[i] = keep;
            const double cd = (fp - fm) / (2.0 * eps);
            const double err = std::abs(analytic[i] - cd) / std::max(1.0, std::abs(cd));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

} // namespace skr::autodiff
