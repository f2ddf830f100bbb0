#include "hanet/tensor.hpp"

#include <cmath>
#include <utility>

namespace hanet {

std::string shape_to_string(const std::vector<size_t>& shape) {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Tensor::Tensor(std::vector<size_t> shape) : shape_(std::move(shape)) {
    if (shape_.empty()) throw DimensionError("tensor shape must not be empty");
    size_t n = 1;
    for (size_t d : shape_) {
        if (d == 0) {
            throw DimensionError("tensor extents must be positive, got " +
                                 shape_to_string(shape_));
        }
        n *= d;
    }
    data_.assign(n, 0.0);
}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) throw DimensionError("tensor shape must not be empty");
    size_t n = 1;
    for (size_t d : shape_) {
        if (d == 0) {
            throw DimensionError("tensor extents must be positive, got " +
                                 shape_to_string(shape_));
        }
        n *= d;
    }
    if (n != data_.size()) {
        throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_to_string(shape_));
    }
}

Tensor Tensor::zeros(std::vector<size_t> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::full(std::vector<size_t> shape, double v) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = v;
    return t;
}

Tensor Tensor::identity(size_t n) {
    Tensor t({n, n});
    for (size_t i = 0; i < n; ++i) t.at2(i, i) = 1.0;
    return t;
}

Tensor Tensor::from2d(std::initializer_list<std::initializer_list<double>> rows) {
    size_t r = rows.size();
    size_t c = rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionError("from2d: ragged rows");
        }
        for (double v : row) data.push_back(v);
    }
    return Tensor({r, c}, std::move(data));
}

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor Tensor::reshaped(std::vector<size_t> new_shape) const {
    size_t n = 1;
    for (size_t d : new_shape) n *= d;
    if (n != data_.size()) {
        throw DimensionError("reshape: " + shape_to_string(shape_) + " -> " +
                             shape_to_string(new_shape) + " changes element count");
    }
    return Tensor(std::move(new_shape), data_);
}

double sum(const Tensor& t) {
    double s = 0.0;
    for (size_t i = 0; i < t.size(); ++i) s += t[i];
    return s;
}

double max_abs(const Tensor& t) {
    double m = 0.0;
    for (size_t i = 0; i < t.size(); ++i) m = std::max(m, std::fabs(t[i]));
    return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("max_abs_diff: shapes differ: " + a.shape_str() + " vs " +
                             b.shape_str());
    }
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace hanet
