#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace acopf::conic {

enum class ConeType { NonNeg, Soc, RSoc };

// Standard-form conic problem:
//
//   minimize    objective' x + objective_constant
//   subject to  A x = b
//               D x + e in K
//
// where K is the ordered product of the slices in `cones`. A NonNeg slice of
// dimension d is the nonnegative orthant R_+^d. A Soc slice (u0, u1) requires
// ||u1|| <= u0. An RSoc slice (u, v, w) requires 2 u v >= ||w||^2, u, v >= 0.
struct Program {
  int num_vars = 0;
  Eigen::VectorXd objective;
  double objective_constant = 0.0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double> D;
  Eigen::VectorXd e;
  std::vector<std::pair<ConeType, int>> cones;
  std::map<std::string, int> var_map;

  int num_eq() const { return static_cast<int>(A.rows()); }
  int num_cone_rows() const { return static_cast<int>(D.rows()); }

  // Column of a named variable; throws std::out_of_range for unmapped names.
  int column(const std::string& name) const;

  // Structural consistency: cone dims sum to D rows, var_map columns in range.
  void validate() const;
};

// Worst violations of a candidate point, used by feasibility oracles.
struct PointCheck {
  double eq_violation = 0.0;    // ||A x - b||_inf
  double cone_violation = 0.0;  // max over slices of Lorentz/orthant violation
  double max() const { return eq_violation > cone_violation ? eq_violation : cone_violation; }
};

PointCheck check_point(const Program& prog, const Eigen::VectorXd& x);

// Violation of a single cone slice value u (0 when u is in the cone).
double cone_violation(ConeType type, const Eigen::VectorXd& u);

// A linear expression sum_k coef_k * x_{col_k} + constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr& add(int col, double coef) {
    if (coef != 0.0) terms.emplace_back(col, coef);
    return *this;
  }
};

// Incremental assembler for Program.
class ProgramBuilder {
 public:
  int add_var(const std::string& name, double obj_coef = 0.0);
  void set_objective(int col, double coef);
  void add_objective_constant(double v) { obj_constant_ += v; }
  void add_equality(const LinExpr& expr, double rhs);
  // expr >= 0
  void add_nonneg(const LinExpr& expr);
  // lo <= expr <= hi as two orthant rows
  void add_range(const LinExpr& expr, double lo, double hi);
  // rows form one cone slice of the given type
  void add_cone(ConeType type, const std::vector<LinExpr>& rows);

  int num_vars() const { return static_cast<int>(names_.size()); }
  Program finalize() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> obj_;
  double obj_constant_ = 0.0;
  std::vector<Eigen::Triplet<double>> a_trips_;
  std::vector<double> b_;
  std::vector<Eigen::Triplet<double>> d_trips_;
  std::vector<double> e_;
  std::vector<std::pair<ConeType, int>> cones_;
  int cone_rows_ = 0;

  void push_cone_row(const LinExpr& expr);
};

// Sparse text round-trip used for external-solver cross checking. The format
// is documented in the README (`conicdump 1`).
std::string dump_program(const Program& prog);
Program parse_program(const std::string& text);
void write_program(const Program& prog, const std::string& path);

}  // namespace acopf::conic
