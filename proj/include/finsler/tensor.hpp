#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace finsler {

/// Dense rank-R tensor over an n-dimensional index range, row-major with the
/// last index fastest. No symmetry packing.
template <int Rank>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(int n) : n_(n), data_(size_for(n), 0.0) {}

    int dim() const { return n_; }
    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    template <class... I>
    double& operator()(I... idx) {
        static_assert(sizeof...(I) == Rank);
        return data_[offset(static_cast<int>(idx)...)];
    }
    template <class... I>
    double operator()(I... idx) const {
        static_assert(sizeof...(I) == Rank);
        return data_[offset(static_cast<int>(idx)...)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    static std::size_t size_for(int n) {
        std::size_t s = 1;
        for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
        return s;
    }
    template <class... I>
    std::size_t offset(I... idx) const {
        std::size_t off = 0;
        ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
        return off;
    }

    int n_ = 0;
    std::vector<double> data_;
};

using Vec = Tensor<1>;
using Mat = Tensor<2>;
using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

}  // namespace finsler
