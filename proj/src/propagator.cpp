#include "zklab/propagator.hpp"

#include <stdexcept>

namespace zk {

QuadratureWeights quadrature_weights(int panels) {
  if (panels < 0) throw std::invalid_argument("quadrature_weights: negative panel count");
  QuadratureWeights q;
  q.weights.assign(panels + 1, 0.0);
  if (panels == 0) return q;
  if (panels == 1) {
    q.weights = {0.5, 0.5};
    q.rule = QuadratureRule::trapezoid;
    return q;
  }
  const int simpson_panels = panels % 2 == 0 ? panels : panels - 3;
  for (int p = 0; p < simpson_panels; p += 2) {
    q.weights[p] += 1.0 / 3.0;
    q.weights[p + 1] += 4.0 / 3.0;
    q.weights[p + 2] += 1.0 / 3.0;
  }
  if (panels % 2 == 0) {
    q.rule = QuadratureRule::simpson;
    return q;
  }
  const int p = simpson_panels;
  q.weights[p] += 3.0 / 8.0;
  q.weights[p + 1] += 9.0 / 8.0;
  q.weights[p + 2] += 9.0 / 8.0;
  q.weights[p + 3] += 3.0 / 8.0;
  q.rule = QuadratureRule::simpson_with_3_8;
  return q;
}

DuhamelResult duhamel(const SpaceTimeField& forcing, double t) {
  forcing.validate();
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  if (std::abs(forcing.t0) > 1e-12)
    throw std::invalid_argument("duhamel: forcing must be sampled from s = 0");
  if (t < -tol || t > forcing.t1() + tol)
    throw std::out_of_range("duhamel: t outside the sampled window");
  const double steps = t / forcing.dt;
  const int n = static_cast<int>(std::lround(steps));
  if (std::abs(n * forcing.dt - t) > tol)
    throw std::invalid_argument("duhamel: t is not aligned to a sample instant");

  const Propagator prop(forcing.grid);
  const QuadratureWeights q = quadrature_weights(n);
  SpecField2 acc(forcing.grid);
  for (int j = 0; j <= n; ++j) {
    if (q.weights[j] == 0.0) continue;
    acc.coeffs += q.weights[j] * prop.evolve(fft_forward(forcing.slices[j]), -forcing.time(j)).coeffs;
  }
  acc.coeffs *= forcing.dt;
  return {fft_inverse(prop.evolve(acc, t)), q.rule, n};
}

}  // namespace zk
