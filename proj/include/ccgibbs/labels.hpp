#pragma once

#include <cstdint>
#include <vector>

namespace ccgibbs {

// One labeling of the vertices (a single chain state).
using Labeling = std::vector<std::int32_t>;

// Marker for "no proposal" (inactive vertex this transition).
constexpr std::int32_t kInactive = -1;

// Dense n x k label matrix: column i is the state of chain i.
// Column-major so a chain's labeling is contiguous.
class LabelMatrix {
  public:
    LabelMatrix() = default;
    LabelMatrix(int n, int chains, std::int32_t fill = 0)
        : n_(n), k_(chains), data_(static_cast<std::size_t>(n) * chains, fill) {}

    int vertex_count() const { return n_; }
    int chain_count() const { return k_; }

    std::int32_t& at(int v, int i) { return data_[static_cast<std::size_t>(i) * n_ + v]; }
    std::int32_t at(int v, int i) const { return data_[static_cast<std::size_t>(i) * n_ + v]; }

    Labeling column(int i) const {
        return Labeling(data_.begin() + static_cast<std::ptrdiff_t>(i) * n_,
                        data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * n_);
    }

    void set_column(int i, const Labeling& x) {
        for (int v = 0; v < n_; ++v) at(v, i) = x[v];
    }

    std::int32_t* column_data(int i) { return data_.data() + static_cast<std::ptrdiff_t>(i) * n_; }
    const std::int32_t* column_data(int i) const {
        return data_.data() + static_cast<std::ptrdiff_t>(i) * n_;
    }

    bool operator==(const LabelMatrix& o) const {
        return n_ == o.n_ && k_ == o.k_ && data_ == o.data_;
    }

    const std::vector<std::int32_t>& raw() const { return data_; }

  private:
    int n_ = 0;
    int k_ = 0;
    std::vector<std::int32_t> data_;
};

} // namespace ccgibbs
