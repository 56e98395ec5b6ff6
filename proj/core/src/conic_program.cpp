#include "acopf/conic/program.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acopf::conic {

int Program::column(const std::string& name) const {
  auto it = var_map.find(name);
  if (it == var_map.end()) throw std::out_of_range("unmapped variable: " + name);
  return it->second;
}

void Program::validate() const {
  if (objective.size() != num_vars) throw std::logic_error("objective size mismatch");
  if (A.cols() != num_vars || D.cols() != num_vars) throw std::logic_error("matrix width mismatch");
  if (b.size() != A.rows() || e.size() != D.rows()) throw std::logic_error("rhs size mismatch");
  int rows = 0;
  for (auto [type, dim] : cones) {
    if (dim < 1) throw std::logic_error("empty cone slice");
    if (type == ConeType::Soc && dim < 2) throw std::logic_error("Soc slice needs dim >= 2");
    if (type == ConeType::RSoc && dim < 3) throw std::logic_error("RSoc slice needs dim >= 3");
    rows += dim;
  }
  if (rows != D.rows()) throw std::logic_error("cone slices do not cover the D rows");
  for (const auto& [name, col] : var_map)
    if (col < 0 || col >= num_vars) throw std::logic_error("var_map column out of range: " + name);
}

double cone_violation(ConeType type, const Eigen::VectorXd& u) {
  switch (type) {
    case ConeType::NonNeg:
      return u.size() == 0 ? 0.0 : std::max(0.0, -u.minCoeff());
    case ConeType::Soc:
      return std::max(0.0, u.tail(u.size() - 1).norm() - u(0));
    case ConeType::RSoc: {
      // Map (u,v,w) onto the plain Lorentz cone and reuse its metric.
      double h = (u(0) + u(1)) / std::numbers::sqrt2;
      double g = (u(0) - u(1)) / std::numbers::sqrt2;
      double tail = std::sqrt(g * g + u.tail(u.size() - 2).squaredNorm());
      return std::max(0.0, tail - h);
    }
  }
  return 0.0;
}

PointCheck check_point(const Program& prog, const Eigen::VectorXd& x) {
  PointCheck out;
  if (prog.A.rows() > 0)
    out.eq_violation = (prog.A * x - prog.b).cwiseAbs().maxCoeff();
  Eigen::VectorXd s = prog.D * x + prog.e;
  int at = 0;
  for (auto [type, dim] : prog.cones) {
    out.cone_violation = std::max(out.cone_violation, cone_violation(type, s.segment(at, dim)));
    at += dim;
  }
  return out;
}

int ProgramBuilder::add_var(const std::string& name, double obj_coef) {
  int col = static_cast<int>(names_.size());
  names_.push_back(name);
  obj_.push_back(obj_coef);
  return col;
}

void ProgramBuilder::set_objective(int col, double coef) { obj_.at(col) = coef; }

void ProgramBuilder::add_equality(const LinExpr& expr, double rhs) {
  int row = static_cast<int>(b_.size());
  for (auto [col, coef] : expr.terms) a_trips_.emplace_back(row, col, coef);
  b_.push_back(rhs - expr.constant);
}

void ProgramBuilder::push_cone_row(const LinExpr& expr) {
  for (auto [col, coef] : expr.terms) d_trips_.emplace_back(cone_rows_, col, coef);
  e_.push_back(expr.constant);
  ++cone_rows_;
}

void ProgramBuilder::add_nonneg(const LinExpr& expr) {
  push_cone_row(expr);
  // Adjacent orthant rows merge into one slice.
  if (!cones_.empty() && cones_.back().first == ConeType::NonNeg)
    ++cones_.back().second;
  else
    cones_.emplace_back(ConeType::NonNeg, 1);
}

void ProgramBuilder::add_range(const LinExpr& expr, double lo, double hi) {
  LinExpr upper;  // hi - expr >= 0
  upper.constant = hi - expr.constant;
  for (auto [col, coef] : expr.terms) upper.add(col, -coef);
  add_nonneg(upper);
  LinExpr lower;  // expr - lo >= 0
  lower.constant = expr.constant - lo;
  lower.terms = expr.terms;
  add_nonneg(lower);
}

void ProgramBuilder::add_cone(ConeType type, const std::vector<LinExpr>& rows) {
  for (const auto& r : rows) push_cone_row(r);
  cones_.emplace_back(type, static_cast<int>(rows.size()));
}

Program ProgramBuilder::finalize() const {
  Program p;
  p.num_vars = num_vars();
  p.objective = Eigen::Map<const Eigen::VectorXd>(obj_.data(), obj_.size());
  p.objective_constant = obj_constant_;
  p.A.resize(static_cast<int>(b_.size()), p.num_vars);
  p.A.setFromTriplets(a_trips_.begin(), a_trips_.end());
  p.b = Eigen::Map<const Eigen::VectorXd>(b_.data(), b_.size());
  p.D.resize(cone_rows_, p.num_vars);
  p.D.setFromTriplets(d_trips_.begin(), d_trips_.end());
  p.e = Eigen::Map<const Eigen::VectorXd>(e_.data(), e_.size());
  p.cones = cones_;
  for (int i = 0; i < num_vars(); ++i) p.var_map[names_[i]] = i;
  p.validate();
  return p;
}

namespace {

const char* cone_name(ConeType t) {
  switch (t) {
    case ConeType::NonNeg: return "nonneg";
    case ConeType::Soc: return "soc";
    case ConeType::RSoc: return "rsoc";
  }
  return "?";
}

ConeType cone_from_name(const std::string& s) {
  if (s == "nonneg") return ConeType::NonNeg;
  if (s == "soc") return ConeType::Soc;
  if (s == "rsoc") return ConeType::RSoc;
  throw std::runtime_error("unknown cone type in dump: " + s);
}

void dump_sparse(std::ostringstream& out, const char* tag,
                 const Eigen::SparseMatrix<double>& m) {
  out << tag << ' ' << m.rows() << ' ' << m.nonZeros() << '\n';
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << buf;
    }
}

void dump_dense(std::ostringstream& out, const char* tag, const Eigen::VectorXd& v) {
  out << tag << ' ' << v.size() << '\n';
  for (int i = 0; i < v.size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g\n", v(i));
    out << buf;
  }
}

}  // namespace

std::string dump_program(const Program& prog) {
  std::ostringstream out;
  out << "conicdump 1\n";
  out << "nvar " << prog.num_vars << '\n';
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", prog.objective_constant);
  out << "objconst " << buf << '\n';
  dump_dense(out, "c", prog.objective);
  dump_sparse(out, "A", prog.A);
  dump_dense(out, "b", prog.b);
  dump_sparse(out, "D", prog.D);
  dump_dense(out, "e", prog.e);
  out << "cones " << prog.cones.size() << '\n';
  for (auto [type, dim] : prog.cones) out << cone_name(type) << ' ' << dim << '\n';
  out << "vars " << prog.var_map.size() << '\n';
  for (const auto& [name, col] : prog.var_map) out << name << ' ' << col << '\n';
  return out.str();
}

Program parse_program(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int version;
  in >> tag >> version;
  if (tag != "conicdump" || version != 1)
    throw std::runtime_error("not a conicdump v1 stream");

  Program p;
  auto expect = [&](const char* want) {
    in >> tag;
    if (tag != want) throw std::runtime_error(std::string("dump: expected ") + want);
  };

  expect("nvar");
  in >> p.num_vars;
  expect("objconst");
  in >> p.objective_constant;

  auto read_dense = [&](const char* want) {
    expect(want);
    int n;
    in >> n;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) in >> v(i);
    return v;
  };
  auto read_sparse = [&](const char* want) {
    expect(want);
    int rows, nnz;
    in >> rows >> nnz;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(nnz);
    for (int k = 0; k < nnz; ++k) {
      int i, j;
      double v;
      in >> i >> j >> v;
      trips.emplace_back(i, j, v);
    }
    Eigen::SparseMatrix<double> m(rows, p.num_vars);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  };

  p.objective = read_dense("c");
  p.A = read_sparse("A");
  p.b = read_dense("b");
  p.D = read_sparse("D");
  p.e = read_dense("e");

  expect("cones");
  int ncones;
  in >> ncones;
  for (int k = 0; k < ncones; ++k) {
    std::string type;
    int dim;
    in >> type >> dim;
    p.cones.emplace_back(cone_from_name(type), dim);
  }
  expect("vars");
  int nvars;
  in >> nvars;
  for (int k = 0; k < nvars; ++k) {
    std::string name;
    int col;
    in >> name >> col;
    p.var_map[name] = col;
  }
  if (!in) throw std::runtime_error("truncated conicdump stream");
  p.validate();
  return p;
}

void write_program(const Program& prog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write program dump: " + path);
  out << dump_program(prog);
}

}  // namespace acopf::conic
