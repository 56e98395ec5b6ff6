#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace acopf::net {

// Thrown for malformed case-file text. `line` is 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Thrown when the case text is well-formed but the network it describes is not
// (dangling branch endpoints, duplicate bus ids, no slack bus, disconnected graph, ...).
class SemanticError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BusKind { Slack, Generator, Load };

struct Bus {
  int id = 0;  // external bus number as it appears in the case file
  BusKind kind = BusKind::Load;
  double pd = 0.0, qd = 0.0;      // demand, pu
  double vmin = 0.0, vmax = 0.0;  // voltage magnitude bounds, pu
  double gsh = 0.0, bsh = 0.0;    // shunt conductance / susceptance, pu

  bool operator==(const Bus&) const = default;
};

struct Generator {
  int bus = 0;  // external bus number
  double pmin = 0.0, pmax = 0.0;  // pu
  double qmin = 0.0, qmax = 0.0;  // pu
  double cost_a = 0.0;            // $/pu^2
  double cost_b = 0.0;            // $/pu
  double cost_c = 0.0;            // $
  double vg = 1.0;                // voltage setpoint from the case file, pu
  double pg0 = 0.0, qg0 = 0.0;    // case-file operating point, pu

  double cost_at(double pg) const { return (cost_a * pg + cost_b) * pg + cost_c; }

  bool operator==(const Generator&) const = default;
};

struct Branch {
  int from = 0, to = 0;  // external bus numbers
  double r = 0.0, x = 0.0;  // series impedance, pu
  double b_ch = 0.0;        // total charging susceptance, pu
  double tap = 1.0;         // off-nominal turns ratio (1.0 if none)
  double shift = 0.0;       // phase shift angle, rad
  double pmax = 0.0;        // real power flow limit, pu; 0 means unlimited

  bool limited() const { return pmax > 0.0; }
  std::complex<double> series_admittance() const {
    return 1.0 / std::complex<double>(r, x);
  }

  bool operator==(const Branch&) const = default;
};

struct NetworkCase {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Branch> branches;

  int n_buses() const { return static_cast<int>(buses.size()); }

  // Maps external bus number -> position in `buses`.
  std::map<int, int> bus_index() const;
  // Position of the slack bus in `buses`.
  int slack_index() const;
  // Positions in `generators` of units attached to bus position `bus_idx`.
  std::vector<std::vector<int>> gens_per_bus() const;

  bool operator==(const NetworkCase&) const = default;
};

// One entry per unordered connected bus pair. Parallel branches between the
// same pair of buses collapse into a single entry; their admittances already
// add up in the Y-bus, and all pairwise quantities downstream (lifted cosine /
// sine products, angle differences, flow limits) are defined per pair.
struct BranchPair {
  int from = 0, to = 0;          // internal bus positions; orientation of the first member branch
  std::vector<int> branch_ids;   // positions in NetworkCase::branches
  double pmax = 0.0;             // summed limit; 0 if any member is unlimited

  bool limited() const { return pmax > 0.0; }
};

std::vector<BranchPair> merged_pairs(const NetworkCase& net);

// Sparse complex bus admittance matrix G + jB over internal bus positions.
struct AdmittanceMatrix {
  int n = 0;
  Eigen::SparseMatrix<std::complex<double>> Y;

  std::complex<double> at(int i, int j) const { return Y.coeff(i, j); }
  double g(int i, int j) const { return Y.coeff(i, j).real(); }
  double b(int i, int j) const { return Y.coeff(i, j).imag(); }
};

// Parses MATPOWER-style case text (mpc.baseMVA / mpc.bus / mpc.gen /
// mpc.branch / mpc.gencost matrices). All quantities are converted to per-unit
// on base_mva. Out-of-service branches and generators are dropped.
NetworkCase parse_case(const std::string& text);
NetworkCase load_case(const std::string& path);

// Standard Y-bus assembly: series admittance y = 1/(r+jx), off-diagonals with
// tap/shift transformation, diagonals with bus shunts and half charging per
// incident branch end.
AdmittanceMatrix build_ybus(const NetworkCase& net);

// Canonical JSON serialization; round-trips exactly.
std::string to_canonical_json(const NetworkCase& net);
NetworkCase case_from_json(const std::string& json_text);

}  // namespace acopf::net
