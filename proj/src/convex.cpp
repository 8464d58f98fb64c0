#include "hybridproj/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hybridproj {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  std::vector<double> u(w.data(), w.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0, theta = 0.0;
  int rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cssv += u[static_cast<size_t>(i)];
    const double t = (cssv - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  return (w.array() - theta).cwiseMax(0.0);
}

namespace {

// Solve min ||sum u_i P_i||^2 over the affine hull (sum u = 1) of the
// points indexed by S.  KKT system with a least-squares fallback for
// degenerate Gram matrices.
Eigen::VectorXd affine_min_norm(const Eigen::MatrixXd& P,
                                const std::vector<int>& S) {
  const int k = static_cast<int>(S.size());
  Eigen::MatrixXd K(k + 1, k + 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) K(i, j) = P.col(S[i]).dot(P.col(S[j]));
  K.block(0, k, k, 1).setOnes();
  K.block(k, 0, 1, k).setOnes();
  K(k, k) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

HullProjection project_to_hull(const Eigen::MatrixXd& V,
                               const Eigen::VectorXd& x) {
  const Eigen::Index m = V.cols();
  HullProjection out;
  out.weights = Eigen::VectorXd::Zero(m);
  if (m == 0) throw SemanticError("project_to_hull: empty vertex set");

  Eigen::MatrixXd P = V.colwise() - x;

  // Start from the single closest vertex.
  int i0 = 0;
  double best = P.col(0).squaredNorm();
  for (Eigen::Index i = 1; i < m; ++i) {
    const double s = P.col(i).squaredNorm();
    if (s < best) {
      best = s;
      i0 = static_cast<int>(i);
    }
  }
  std::vector<int> S{i0};
  std::vector<double> w{1.0};

  const double scale = 1.0 + P.colwise().norm().maxCoeff();
  const double eps = 1e-14 * scale * scale;

  Eigen::VectorXd z = P.col(i0);
  for (int outer = 0; outer < 16 * static_cast<int>(m) + 64; ++outer) {
    // Most improving vertex for the current z.
    int j = 0;
    double dmin = z.dot(P.col(0));
    for (Eigen::Index i = 1; i < m; ++i) {
      const double d = z.dot(P.col(i));
      if (d < dmin) {
        dmin = d;
        j = static_cast<int>(i);
      }
    }
    if (dmin >= z.squaredNorm() - eps) break;  // optimality
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    w.push_back(0.0);

    // Minor cycle: pull the affine minimizer back into the simplex face.
    for (int inner = 0; inner < 2 * static_cast<int>(m) + 16; ++inner) {
      Eigen::VectorXd u = affine_min_norm(P, S);
      double umin = u.minCoeff();
      if (umin > -1e-12) {
        for (size_t i = 0; i < S.size(); ++i) w[i] = std::max(u[static_cast<Eigen::Index>(i)], 0.0);
        break;
      }
      double theta = 1.0;
      for (size_t i = 0; i < S.size(); ++i) {
        const double ui = u[static_cast<Eigen::Index>(i)];
        if (ui <= 0.0 && w[i] - ui > 0.0)
          theta = std::min(theta, w[i] / (w[i] - ui));
      }
      for (size_t i = 0; i < S.size(); ++i)
        w[i] = (1.0 - theta) * w[i] + theta * u[static_cast<Eigen::Index>(i)];
      // Drop extinguished vertices.
      for (size_t i = S.size(); i-- > 0;) {
        if (w[i] <= 1e-12) {
          S.erase(S.begin() + static_cast<std::ptrdiff_t>(i));
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        }
      }
      if (S.empty()) {  // numerically extinct; restart from nearest vertex
        S.push_back(j);
        w.push_back(1.0);
        break;
      }
    }

    z.setZero();
    for (size_t i = 0; i < S.size(); ++i) z += w[i] * P.col(S[i]);
  }

  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0.0) total = 1.0;
  for (size_t i = 0; i < S.size(); ++i) out.weights[S[i]] = w[i] / total;
  out.point = V * out.weights;
  out.distance = (out.point - x).norm();
  return out;
}

Eigen::VectorXd project_to_halfspace(const HalfSpace& h,
                                     const Eigen::VectorXd& z) {
  const double v = h.violation(z);
  if (v <= 0.0) return z;
  return z - (v / h.normal.squaredNorm()) * h.normal;
}

Eigen::VectorXd dykstra(const Eigen::VectorXd& start,
                        const std::vector<Projector>& sets, double tol,
                        int max_cycles, int* cycles_used) {
  const size_t k = sets.size();
  Eigen::VectorXd x = start;
  std::vector<Eigen::VectorXd> incr(k, Eigen::VectorXd::Zero(start.size()));
  int cycle = 0;
  for (; cycle < max_cycles; ++cycle) {
    const Eigen::VectorXd x_prev = x;
    for (size_t i = 0; i < k; ++i) {
      const Eigen::VectorXd y = x + incr[i];
      const Eigen::VectorXd px = sets[i](y);
      incr[i] = y - px;
      x = px;
    }
    if ((x - x_prev).lpNorm<Eigen::Infinity>() <= tol) {
      ++cycle;
      break;
    }
  }
  if (cycles_used) *cycles_used = cycle;
  return x;
}

double region_violation(const FeasibleRegion& region,
                        const Eigen::VectorXd& z) {
  double v = region.linear_violation(z);
  if (region.has_hull())
    v = std::max(v, project_to_hull(region.vertex_matrix(), z).distance);
  return v;
}

bool region_contains(const FeasibleRegion& region, const Eigen::VectorXd& z,
                     double tol) {
  return region_violation(region, z) <= tol;
}

}  // namespace hybridproj
