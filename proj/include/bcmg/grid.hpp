#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bcmg {

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
using MultiIndex = std::array<int, Dim>;

/// Node values over all (N+1)^d nodes of a grid, x index running fastest.
using Field = std::vector<double>;

template <int Dim>
double dot(const Point<Dim>& a, const Point<Dim>& b) noexcept {
  double s = 0.0;
  for (int k = 0; k < Dim; ++k) s += a[k] * b[k];
  return s;
}

template <int Dim>
double norm2(const Point<Dim>& a) noexcept {
  return std::sqrt(dot<Dim>(a, a));
}

/// Uniform Cartesian grid covering [-1,1]^Dim with N cells per axis.
///
/// Node i along an axis sits at x_i = -1 + i*h with h = 2/N. Nodes are
/// stored lexicographically with the first axis fastest, so the flat index
/// order is the Gauss-Seidel ordering used by the smoother.
template <int Dim>
class UniformGrid {
  static_assert(Dim >= 1 && Dim <= 3, "supported dimensions are 1, 2 and 3");

 public:
  static constexpr int dimension = Dim;

  explicit UniformGrid(int cells) : cells_(cells), h_(2.0 / cells) {
    if (cells < 2) throw std::invalid_argument("UniformGrid: need at least 2 cells per axis");
    std::size_t s = 1;
    for (int k = 0; k < Dim; ++k) {
      stride_[k] = s;
      s *= static_cast<std::size_t>(cells + 1);
    }
    count_ = s;
  }

  int cells() const noexcept { return cells_; }
  double spacing() const noexcept { return h_; }
  std::size_t node_count() const noexcept { return count_; }
  std::size_t stride(int axis) const noexcept { return stride_[axis]; }
  double coordinate(int i) const noexcept { return -1.0 + i * h_; }

  std::size_t index(const MultiIndex<Dim>& m) const noexcept {
    std::size_t idx = 0;
    for (int k = 0; k < Dim; ++k) idx += static_cast<std::size_t>(m[k]) * stride_[k];
    return idx;
  }

  MultiIndex<Dim> multi_index(std::size_t idx) const noexcept {
    MultiIndex<Dim> m{};
    const auto n1 = static_cast<std::size_t>(cells_ + 1);
    for (int k = 0; k < Dim; ++k) {
      m[k] = static_cast<int>(idx % n1);
      idx /= n1;
    }
    return m;
  }

  Point<Dim> position(const MultiIndex<Dim>& m) const noexcept {
    Point<Dim> p{};
    for (int k = 0; k < Dim; ++k) p[k] = coordinate(m[k]);
    return p;
  }

  Point<Dim> position(std::size_t idx) const noexcept { return position(multi_index(idx)); }

  bool contains(const MultiIndex<Dim>& m) const noexcept {
    for (int k = 0; k < Dim; ++k)
      if (m[k] < 0 || m[k] > cells_) return false;
    return true;
  }

  bool on_boundary(const MultiIndex<Dim>& m) const noexcept {
    for (int k = 0; k < Dim; ++k)
      if (m[k] == 0 || m[k] == cells_) return true;
    return false;
  }

  bool can_coarsen(int min_cells = 4) const noexcept {
    return cells_ % 2 == 0 && cells_ / 2 >= min_cells;
  }

  UniformGrid coarsened() const {
    if (cells_ % 2 != 0) throw std::logic_error("UniformGrid: odd cell count cannot be coarsened");
    return UniformGrid(cells_ / 2);
  }

  Field make_field(double value = 0.0) const { return Field(count_, value); }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) noexcept {
    return a.cells_ == b.cells_;
  }

 private:
  int cells_;
  double h_;
  std::array<std::size_t, Dim> stride_{};
  std::size_t count_ = 0;
};

/// Calls fn(offset) for every offset in {-1,0,1}^Dim, first axis fastest.
template <int Dim, typename Fn>
void for_each_unit_offset(Fn&& fn) {
  MultiIndex<Dim> o{};
  o.fill(-1);
  while (true) {
    fn(static_cast<const MultiIndex<Dim>&>(o));
    int k = 0;
    while (k < Dim && o[k] == 1) o[k++] = -1;
    if (k == Dim) return;
    ++o[k];
  }
}

/// Calls fn(local) for every local index in {0,1,2}^Dim, first axis fastest.
template <int Dim, typename Fn>
void for_each_block3(Fn&& fn) {
  for_each_unit_offset<Dim>([&](const MultiIndex<Dim>& o) {
    MultiIndex<Dim> local{};
    for (int k = 0; k < Dim; ++k) local[k] = o[k] + 1;
    fn(static_cast<const MultiIndex<Dim>&>(local));
  });
}

}  // namespace bcmg
