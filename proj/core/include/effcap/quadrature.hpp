#ifndef EFFCAP_QUADRATURE_HPP
#define EFFCAP_QUADRATURE_HPP

#include <functional>
#include <string>
#include <vector>

#include "effcap/errors.hpp"

namespace effcap::quad {

/// Nodes and weights of a one-dimensional quadrature rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Laguerre rule: integrates f against the weight e^{-x} on [0, inf).
/// Exact for polynomials up to degree 2n-1. Computed by Golub-Welsch.
Rule gauss_laguerre(int n);

/// Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// Sum of w_i * f(x_i) over a rule's nodes.
double apply(const Rule& rule, const std::function<double(double)>& f);

struct AdaptiveOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-15;
  int max_intervals = 6000;
  // Interior breakpoints seeding the initial segment set. Integrands with a
  // boundary layer much narrower than the domain (e.g. (1+z)^{-beta} at
  // large beta) evaluate to zero at every node of a single wide panel, so
  // the layer must be pre-split to be seen at all.
  std::vector<double> breakpoints;
  // Context string used in error messages, e.g. "fading.expect_1d".
  std::string where = "quadrature.integrate";
};

/// Globally adaptive Gauss-Kronrod 7/15 integration of f over [a, b].
/// Deterministic for a given integrand. Throws NonFiniteIntegrand if f
/// returns NaN/Inf at a node, NumericError if the tolerance cannot be met
/// within max_intervals.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt = {});

/// Numerically stable log(sum(exp(x_i))) over a sequence.
double log_sum_exp(const std::vector<double>& xs);

}  // namespace effcap::quad

#endif
