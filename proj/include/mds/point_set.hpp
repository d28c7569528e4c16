#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace mds {

// A fixed-dimension list of points stored contiguously.
class PointSet {
public:
    PointSet() = default;

    PointSet(int dim, int count) : dim_(dim), data_(static_cast<size_t>(dim) * count, 0.0) {
        if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
    }

    PointSet(int dim, std::vector<double> coords) : dim_(dim), data_(std::move(coords)) {
        if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
        if (data_.size() % dim != 0)
            throw std::invalid_argument("PointSet: coordinate count not divisible by dimension");
    }

    int dim() const { return dim_; }
    int count() const { return dim_ == 0 ? 0 : static_cast<int>(data_.size()) / dim_; }

    std::span<double> operator[](int i) { return {data_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)}; }
    std::span<const double> operator[](int i) const {
        return {data_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int dim_ = 0;
    std::vector<double> data_;
};

}  // namespace mds
