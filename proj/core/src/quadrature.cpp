#include "effcap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace effcap::quad {
namespace {

// Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts),
// tracking only the first component of each eigenvector. diag/offdiag are
// overwritten; first[i] ends up as the first component of eigenvector i.
// This is the Golub-Welsch workhorse: for a Jacobi matrix the node is the
// eigenvalue and the weight is mu0 * first[i]^2.
void tridiag_eigen_first_row(std::vector<double>& diag, std::vector<double>& offdiag,
                             std::vector<double>& first) {
  const int n = static_cast<int>(diag.size());
  first.assign(n, 0.0);
  if (n == 0) return;
  first[0] = 1.0;
  if (n == 1) return;

  std::vector<double> e(offdiag);  // e[0..n-2] subdiagonal
  e.resize(n, 0.0);

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(e[m]) <= 1e-300 + std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 80)
          throw NumericError("quadrature.gauss_laguerre", "QL iteration failed to converge");
        double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          // rotate the tracked eigenvector row
          f = first[i + 1];
          first[i + 1] = s * first[i] + c * f;
          first[i] = c * first[i] - s * f;
        }
        if (underflow) continue;
        diag[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// QUADPACK 15-point Kronrod extension of the 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b,
             const std::string& where) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  auto eval = [&](double x) {
    double v = f(x);
    if (!std::isfinite(v)) throw NonFiniteIntegrand(where, x);
    return v;
  };

  const double fc = eval(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = eval(c - dx);
    const double f2 = eval(c + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  resasc *= std::abs(h);
  resabs *= std::abs(h);

  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(err, 50.0 * kEps * resabs);
  return {a, b, resk * h, err};
}

}  // namespace

Rule gauss_laguerre(int n) {
  if (n < 1) throw NumericError("quadrature.gauss_laguerre", "need n >= 1 nodes");
  // Jacobi matrix of the Laguerre polynomials: diag 2k+1, offdiag k.
  std::vector<double> diag(n), off(std::max(0, n - 1));
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off[k - 1] = static_cast<double>(k);
  std::vector<double> first;
  tridiag_eigen_first_row(diag, off, first);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return diag[i] < diag[j]; });

  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = diag[idx[i]];
    r.weights[i] = first[idx[i]] * first[idx[i]];  // mu0 = integral of e^{-x} = 1
  }
  return r;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw NumericError("quadrature.gauss_legendre", "need n >= 1 nodes");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

double apply(const Rule& rule, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt) {
  if (a == b) return 0.0;
  std::vector<double> edges = {a};
  for (double x : opt.breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    Segment s = gk15(f, edges[i - 1], edges[i], opt.where);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int n_intervals = static_cast<int>(edges.size()) - 1;

  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (n_intervals >= opt.max_intervals) {
      // Roundoff-limited error estimates plateau; only fail when the estimate
      // is meaningfully above the requested tolerance.
      if (total_err > 100.0 * std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))
        throw NumericError(opt.where, "adaptive integration did not converge: value=" +
                                          std::to_string(total) +
                                          " err=" + std::to_string(total_err) +
                                          " intervals=" + std::to_string(n_intervals));
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating point resolution; accept its estimate.
      total_err -= worst.error;
      continue;
    }
    Segment left = gk15(f, worst.a, mid, opt.where);
    Segment right = gk15(f, mid, worst.b, opt.where);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n_intervals;
  }
  return total;
}

double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace effcap::quad
