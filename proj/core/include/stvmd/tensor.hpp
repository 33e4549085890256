#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace stvmd {

// Dense row-major tensor with a fixed rank. The last index is contiguous,
// so lane() hands out a span over it (one spectrum, one frame, one channel).
template <typename T, std::size_t Rank>
class Tensor {
 public:
  using Shape = std::array<std::size_t, Rank>;

  Tensor() { shape_.fill(0); }

  explicit Tensor(Shape shape, T fill = T{})
      : shape_(shape), data_(count(shape), fill) {}

  Tensor(Shape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
    assert(data_.size() == count(shape_));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t extent(std::size_t axis) const noexcept { return shape_[axis]; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  template <typename... I>
  T& operator()(I... idx) noexcept {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  template <typename... I>
  const T& operator()(I... idx) const noexcept {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  // Contiguous innermost lane at the given leading indices.
  template <typename... I>
  std::span<T> lane(I... idx) noexcept {
    static_assert(sizeof...(I) == Rank - 1);
    return {data_.data() + offset({static_cast<std::size_t>(idx)..., 0}), shape_[Rank - 1]};
  }

  template <typename... I>
  std::span<const T> lane(I... idx) const noexcept {
    static_assert(sizeof...(I) == Rank - 1);
    return {data_.data() + offset({static_cast<std::size_t>(idx)..., 0}), shape_[Rank - 1]};
  }

  std::span<T> flat() noexcept { return data_; }
  std::span<const T> flat() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Tensor&) const = default;

 private:
  static std::size_t count(const Shape& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>{});
  }

  std::size_t offset(const Shape& idx) const noexcept {
    std::size_t off = 0;
    for (std::size_t a = 0; a < Rank; ++a) {
      assert(idx[a] < shape_[a]);
      off = off * shape_[a] + idx[a];
    }
    return off;
  }

  Shape shape_;
  std::vector<T> data_;
};

}  // namespace stvmd
