// Prints the first-order spectrum of an admissible triaxial ellipsoid next to
// the Galerkin eigenvalues of the same surface and the round sphere.
#include <cstdio>

#include "ellspec/comparison.hpp"
#include "ellspec/oracle.hpp"

int main() {
  const ellspec::PerturbationParams p{-1.0, -2.0, -2.5, 0.02};
  const int L = 3;
  const auto report = ellspec::compare(L, p);
  const auto oracle = ellspec::laplace_beltrami_spectrum(ellspec::ellipsoid_from_params(p));

  std::printf("ellipsoid (%.4f, %.4f, %.4f), admissible: %s\n", 1 + p.alpha * p.epsilon,
              1 + p.beta * p.epsilon, 1 + p.gamma * p.epsilon,
              report.admissible ? "yes" : "no");
  std::printf("%5s %4s %12s %14s %14s %12s\n", "i", "l", "sphere", "first-order", "galerkin",
              "margin");
  for (const auto &e : report.entries)
    std::printf("%5d %4d %12.6f %14.8f %14.8f %12.3e\n", e.index, e.l, e.sphere, e.perturbed,
                oracle.eigenvalues[e.index], e.margin);
  std::printf("verdict: %s\n", report.verdict ? "every eigenvalue dominates the sphere's"
                                              : "some eigenvalue falls below the sphere's");
  return 0;
}
