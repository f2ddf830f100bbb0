#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "hanet/errors.hpp"

namespace hanet {

std::string shape_to_string(const std::vector<size_t>& shape);

// Dense n-dimensional array of 64-bit floats, row-major.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<size_t> shape);  // zero-filled
    Tensor(std::vector<size_t> shape, std::vector<double> data);

    static Tensor zeros(std::vector<size_t> shape);
    static Tensor full(std::vector<size_t> shape, double v);
    static Tensor identity(size_t n);
    static Tensor from2d(std::initializer_list<std::initializer_list<double>> rows);

    const std::vector<size_t>& shape() const { return shape_; }
    size_t rank() const { return shape_.size(); }
    size_t dim(size_t i) const { return shape_.at(i); }
    size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](size_t i) { return data_[i]; }
    double operator[](size_t i) const { return data_[i]; }

    double& at2(size_t i, size_t j) { return data_[i * shape_[1] + j]; }
    double at2(size_t i, size_t j) const { return data_[i * shape_[1] + j]; }
    double& at3(size_t c, size_t y, size_t x) {
        return data_[(c * shape_[1] + y) * shape_[2] + x];
    }
    double at3(size_t c, size_t y, size_t x) const {
        return data_[(c * shape_[1] + y) * shape_[2] + x];
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;
    Tensor reshaped(std::vector<size_t> new_shape) const;
    std::string shape_str() const { return shape_to_string(shape_); }

  private:
    std::vector<size_t> shape_;
    std::vector<double> data_;
};

double sum(const Tensor& t);
double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace hanet
