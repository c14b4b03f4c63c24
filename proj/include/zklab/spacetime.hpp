#pragma once

#include <stdexcept>
#include <vector>

#include "zklab/grid.hpp"

namespace zk {

/// Time-indexed sequence of fields on one grid, sampled at t0 + n*dt,
/// n = 0..nt-1 (both ends of [t0, t1] included).
struct SpaceTimeField {
  Grid2 grid;
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<Field2> slices;

  SpaceTimeField() = default;
  SpaceTimeField(const Grid2& g, double t0_, double dt_, std::vector<Field2> s)
      : grid(g), t0(t0_), dt(dt_), slices(std::move(s)) {
    validate();
  }
  /// nt zero slices covering [t0, t1].
  static SpaceTimeField zeros(const Grid2& g, double t0, double t1, int nt) {
    if (nt < 2) throw std::invalid_argument("SpaceTimeField: need at least two time samples");
    return SpaceTimeField(g, t0, (t1 - t0) / (nt - 1), std::vector<Field2>(nt, Field2(g)));
  }

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: time step must be positive");
    if (slices.empty()) throw std::invalid_argument("SpaceTimeField: no slices");
    for (const auto& s : slices) require_same_grid(grid, s.grid, "SpaceTimeField");
  }

  [[nodiscard]] int nt() const { return static_cast<int>(slices.size()); }
  [[nodiscard]] double time(int n) const { return t0 + n * dt; }
  [[nodiscard]] double t1() const { return time(nt() - 1); }

  SpaceTimeField& operator*=(double c) {
    for (auto& s : slices) s *= c;
    return *this;
  }
};

}  // namespace zk
