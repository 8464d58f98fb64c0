#ifndef HYBRIDPROJ_TRACE_HPP
#define HYBRIDPROJ_TRACE_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace hybridproj {

/// One record per iterate x_n.  Projection statistics describe the step
/// that produced the iterate; they are zero/NaN on the initial row.
/// fixed_* fields are NaN when the operator's fixed points are unknown.
struct TraceRow {
  int n = 0;
  Eigen::VectorXd x;
  double res_T = 0.0;          // ||x_n - T x_n||
  double res_Tn = 0.0;         // ||x_n - T^n x_n||
  double anchor_dist = 0.0;    // ||x - x_n||
  double fixed_dist = 0.0;     // dist(x_n, F(T))
  int hull_count = 0;          // vertices of C_n
  int proj_iters = 0;
  double vi_residual = 0.0;
  double dn_violation = 0.0;   // worst violation of any u in F(T) against
                               // the accumulated D half-spaces
  double fixed_hull_dist = 0.0;  // Hausdorff slack: max_u dist(u, C_n hull)
};

struct RunTrace {
  int dim = 0;
  std::vector<TraceRow> rows;
  std::string stop_reason;
  std::string config_echo;
};

/// Fixed column order, shortest round-trip decimals.
void write_csv(const RunTrace& trace, std::ostream& os);
std::string to_csv(const RunTrace& trace);
void write_csv_file(const RunTrace& trace, const std::string& path);

RunTrace read_csv(std::istream& is);
RunTrace read_csv_file(const std::string& path);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_TRACE_HPP
