#include "acopf/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace acopf::net {

namespace {

struct Row {
  int line = 0;
  std::vector<double> values;
};

struct RawCase {
  std::string name;
  double base_mva = -1.0;
  int base_mva_line = 0;
  std::vector<Row> bus, gen, branch, gencost;
};

std::string strip_comment(const std::string& s) {
  auto pos = s.find('%');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<double> parse_numbers(const std::string& s, int line) {
  std::vector<double> out;
  const char* p = s.c_str();
  while (*p) {
    while (*p && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
    if (!*p) break;
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) throw SyntaxError(line, std::string("expected a number, got '") + p + "'");
    out.push_back(v);
    p = end;
  }
  return out;
}

// Minimal scanner for the MATPOWER text format: scalar assignments plus
// matrix blocks `mpc.<field> = [ rows... ];`. Rows end at ';' or newline.
RawCase scan(const std::string& text) {
  RawCase raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<Row>* block = nullptr;

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip_comment(line);
    if (is_blank(s)) continue;

    if (block) {
      // Inside a matrix block; look for the closing bracket.
      std::string body = s;
      auto close = body.find(']');
      bool closes = close != std::string::npos;
      if (closes) body = body.substr(0, close);
      std::string chunk;
      std::istringstream rows(body);
      while (std::getline(rows, chunk, ';')) {
        if (is_blank(chunk)) continue;
        block->push_back({lineno, parse_numbers(chunk, lineno)});
      }
      if (closes) block = nullptr;
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string::npos) {
      if (s.find("function") != std::string::npos) continue;
      throw SyntaxError(lineno, "unrecognized statement: " + s);
    }
    std::string lhs = s.substr(0, eq);
    std::string rhs = s.substr(eq + 1);
    lhs.erase(std::remove_if(lhs.begin(), lhs.end(),
                             [](unsigned char c) { return std::isspace(c); }),
              lhs.end());

    if (lhs == "mpc.baseMVA") {
      raw.base_mva = parse_numbers(strip_comment(rhs), lineno).at(0);
      raw.base_mva_line = lineno;
      continue;
    }
    if (lhs == "mpc.version" || lhs.rfind("mpc.bus_name", 0) == 0) continue;
    if (lhs.rfind("function", 0) == 0) continue;

    std::vector<Row>* target = nullptr;
    if (lhs == "mpc.bus") target = &raw.bus;
    else if (lhs == "mpc.gen") target = &raw.gen;
    else if (lhs == "mpc.branch") target = &raw.branch;
    else if (lhs == "mpc.gencost") target = &raw.gencost;

    if (!target) continue;  // unknown mpc.* fields are ignored

    auto open = rhs.find('[');
    if (open == std::string::npos)
      throw SyntaxError(lineno, lhs + " must be a matrix block");
    std::string rest = rhs.substr(open + 1);
    auto close = rest.find(']');
    bool closes = close != std::string::npos;
    if (closes) rest = rest.substr(0, close);
    std::string chunk;
    std::istringstream rows(rest);
    while (std::getline(rows, chunk, ';')) {
      if (is_blank(chunk)) continue;
      target->push_back({lineno, parse_numbers(chunk, lineno)});
    }
    block = closes ? nullptr : target;
  }
  if (block) throw SyntaxError(lineno, "unterminated matrix block");
  return raw;
}

double col(const Row& row, size_t idx, const char* table) {
  if (idx >= row.values.size())
    throw SyntaxError(row.line, std::string(table) + " row has only " +
                                    std::to_string(row.values.size()) + " columns, need " +
                                    std::to_string(idx + 1));
  return row.values[idx];
}

void check_connected(const NetworkCase& net) {
  const int n = net.n_buses();
  if (n == 0) throw SemanticError("case has no buses");
  auto index = net.bus_index();
  std::vector<std::vector<int>> adj(n);
  for (const auto& br : net.branches) {
    int f = index.at(br.from), t = index.at(br.to);
    adj[f].push_back(t);
    adj[t].push_back(f);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  if (count != n) {
    for (int i = 0; i < n; ++i)
      if (!seen[i])
        throw SemanticError("network graph is disconnected (bus " +
                            std::to_string(net.buses[i].id) + " unreachable)");
  }
}

void validate(NetworkCase& net) {
  std::map<int, int> index;
  for (int i = 0; i < net.n_buses(); ++i) {
    const Bus& b = net.buses[i];
    if (index.count(b.id))
      throw SemanticError("duplicate bus id " + std::to_string(b.id));
    index[b.id] = i;
    if (!(b.vmin > 0.0) || b.vmin > b.vmax)
      throw SemanticError("bus " + std::to_string(b.id) +
                          ": voltage bounds must satisfy 0 < Vmin <= Vmax");
  }

  int slack_count = 0;
  for (const auto& b : net.buses)
    if (b.kind == BusKind::Slack) ++slack_count;
  if (slack_count == 0) throw SemanticError("no slack bus");
  if (slack_count > 1) throw SemanticError("more than one slack bus");

  std::vector<char> has_gen(net.n_buses(), 0);
  for (const auto& g : net.generators) {
    auto it = index.find(g.bus);
    if (it == index.end())
      throw SemanticError("generator references missing bus " + std::to_string(g.bus));
    has_gen[it->second] = 1;
    if (g.pmin > g.pmax || g.qmin > g.qmax)
      throw SemanticError("generator at bus " + std::to_string(g.bus) +
                          ": dispatch bounds inverted");
    if (g.cost_a < 0.0)
      throw SemanticError("generator at bus " + std::to_string(g.bus) +
                          ": negative quadratic cost coefficient");
  }

  for (auto& b : net.buses) {
    int i = index.at(b.id);
    if (b.kind == BusKind::Slack && !has_gen[i])
      throw SemanticError("slack bus " + std::to_string(b.id) + " has no generator");
    // A generator-typed bus whose units are all out of service behaves as a load bus.
    if (b.kind == BusKind::Generator && !has_gen[i]) b.kind = BusKind::Load;
  }

  for (const auto& br : net.branches) {
    if (!index.count(br.from) || !index.count(br.to))
      throw SemanticError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                          " references a missing bus");
    if (br.from == br.to)
      throw SemanticError("branch at bus " + std::to_string(br.from) + " is a self-loop");
    if (br.r == 0.0 && br.x == 0.0)
      throw SemanticError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                          " has zero impedance");
    if (!(br.tap > 0.0))
      throw SemanticError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                          " has non-positive tap ratio");
  }

  check_connected(net);
}

}  // namespace

std::map<int, int> NetworkCase::bus_index() const {
  std::map<int, int> m;
  for (int i = 0; i < n_buses(); ++i) m[buses[i].id] = i;
  return m;
}

int NetworkCase::slack_index() const {
  for (int i = 0; i < n_buses(); ++i)
    if (buses[i].kind == BusKind::Slack) return i;
  throw SemanticError("no slack bus");
}

std::vector<std::vector<int>> NetworkCase::gens_per_bus() const {
  auto index = bus_index();
  std::vector<std::vector<int>> out(n_buses());
  for (int g = 0; g < static_cast<int>(generators.size()); ++g)
    out[index.at(generators[g].bus)].push_back(g);
  return out;
}

std::vector<BranchPair> merged_pairs(const NetworkCase& net) {
  auto index = net.bus_index();
  std::map<std::pair<int, int>, int> seen;  // unordered key -> pair position
  std::vector<BranchPair> pairs;
  for (int k = 0; k < static_cast<int>(net.branches.size()); ++k) {
    const Branch& br = net.branches[k];
    int f = index.at(br.from), t = index.at(br.to);
    auto key = std::minmax(f, t);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen[key] = static_cast<int>(pairs.size());
      pairs.push_back({f, t, {k}, br.pmax});
    } else {
      BranchPair& p = pairs[it->second];
      p.branch_ids.push_back(k);
      // Parallel circuits: capacities add; one unlimited member makes the pair unlimited.
      p.pmax = (p.limited() && br.limited()) ? p.pmax + br.pmax : 0.0;
    }
  }
  return pairs;
}

NetworkCase parse_case(const std::string& text) {
  RawCase raw = scan(text);
  if (raw.base_mva <= 0.0)
    throw SemanticError("missing or non-positive mpc.baseMVA");

  NetworkCase net;
  net.base_mva = raw.base_mva;
  const double base = raw.base_mva;

  for (const Row& row : raw.bus) {
    Bus b;
    b.id = static_cast<int>(col(row, 0, "bus"));
    int type = static_cast<int>(col(row, 1, "bus"));
    switch (type) {
      case 3: b.kind = BusKind::Slack; break;
      case 2: b.kind = BusKind::Generator; break;
      case 1: b.kind = BusKind::Load; break;
      default:
        throw SemanticError("bus " + std::to_string(b.id) + ": unsupported bus type " +
                            std::to_string(type));
    }
    b.pd = col(row, 2, "bus") / base;
    b.qd = col(row, 3, "bus") / base;
    b.gsh = col(row, 4, "bus") / base;
    b.bsh = col(row, 5, "bus") / base;
    b.vmax = col(row, 11, "bus");
    b.vmin = col(row, 12, "bus");
    net.buses.push_back(b);
  }

  if (!raw.gencost.empty() && raw.gencost.size() != raw.gen.size())
    throw SemanticError("mpc.gencost must have one row per generator");

  for (size_t i = 0; i < raw.gen.size(); ++i) {
    const Row& row = raw.gen[i];
    if (col(row, 7, "gen") <= 0.0) continue;  // out of service
    Generator g;
    g.bus = static_cast<int>(col(row, 0, "gen"));
    g.pg0 = col(row, 1, "gen") / base;
    g.qg0 = col(row, 2, "gen") / base;
    g.qmax = col(row, 3, "gen") / base;
    g.qmin = col(row, 4, "gen") / base;
    g.vg = col(row, 5, "gen");
    g.pmax = col(row, 8, "gen") / base;
    g.pmin = col(row, 9, "gen") / base;
    if (!raw.gencost.empty()) {
      const Row& cost = raw.gencost[i];
      int model = static_cast<int>(col(cost, 0, "gencost"));
      if (model != 2)
        throw SemanticError("generator at bus " + std::to_string(g.bus) +
                            ": only polynomial cost model 2 is supported");
      int ncost = static_cast<int>(col(cost, 3, "gencost"));
      if (ncost < 1 || ncost > 3)
        throw SemanticError("generator at bus " + std::to_string(g.bus) +
                            ": polynomial cost must have 1 to 3 coefficients");
      // Coefficients are listed highest degree first, in MW units.
      double c2 = 0, c1 = 0, c0 = 0;
      if (ncost == 3) {
        c2 = col(cost, 4, "gencost");
        c1 = col(cost, 5, "gencost");
        c0 = col(cost, 6, "gencost");
      } else if (ncost == 2) {
        c1 = col(cost, 4, "gencost");
        c0 = col(cost, 5, "gencost");
      } else {
        c0 = col(cost, 4, "gencost");
      }
      g.cost_a = c2 * base * base;
      g.cost_b = c1 * base;
      g.cost_c = c0;
    }
    net.generators.push_back(g);
  }

  for (const Row& row : raw.branch) {
    if (col(row, 10, "branch") <= 0.0) continue;  // out of service
    Branch br;
    br.from = static_cast<int>(col(row, 0, "branch"));
    br.to = static_cast<int>(col(row, 1, "branch"));
    br.r = col(row, 2, "branch");
    br.x = col(row, 3, "branch");
    br.b_ch = col(row, 4, "branch");
    br.pmax = col(row, 5, "branch") / base;  // RATE_A in MVA; 0 keeps meaning unlimited
    double ratio = col(row, 8, "branch");
    br.tap = ratio == 0.0 ? 1.0 : ratio;
    br.shift = col(row, 9, "branch") * std::numbers::pi / 180.0;
    net.branches.push_back(br);
  }

  validate(net);
  return net;
}

NetworkCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open case file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  NetworkCase net = parse_case(buf.str());
  auto slash = path.find_last_of("/\\");
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = stem.rfind('.');
  net.name = dot == std::string::npos ? stem : stem.substr(0, dot);
  return net;
}

namespace {

using nlohmann::json;

json bus_to_json(const Bus& b) {
  return json{{"id", b.id},
              {"kind", b.kind == BusKind::Slack ? "slack"
                       : b.kind == BusKind::Generator ? "generator" : "load"},
              {"pd", b.pd}, {"qd", b.qd},
              {"vmin", b.vmin}, {"vmax", b.vmax},
              {"gsh", b.gsh}, {"bsh", b.bsh}};
}

Bus bus_from_json(const json& j) {
  Bus b;
  b.id = j.at("id").get<int>();
  std::string kind = j.at("kind").get<std::string>();
  b.kind = kind == "slack" ? BusKind::Slack
           : kind == "generator" ? BusKind::Generator : BusKind::Load;
  b.pd = j.at("pd").get<double>();
  b.qd = j.at("qd").get<double>();
  b.vmin = j.at("vmin").get<double>();
  b.vmax = j.at("vmax").get<double>();
  b.gsh = j.at("gsh").get<double>();
  b.bsh = j.at("bsh").get<double>();
  return b;
}

}  // namespace

std::string to_canonical_json(const NetworkCase& net) {
  json j;
  j["name"] = net.name;
  j["base_mva"] = net.base_mva;
  j["buses"] = json::array();
  for (const auto& b : net.buses) j["buses"].push_back(bus_to_json(b));
  j["generators"] = json::array();
  for (const auto& g : net.generators)
    j["generators"].push_back(json{{"bus", g.bus},
                                   {"pmin", g.pmin}, {"pmax", g.pmax},
                                   {"qmin", g.qmin}, {"qmax", g.qmax},
                                   {"cost_a", g.cost_a}, {"cost_b", g.cost_b},
                                   {"cost_c", g.cost_c}, {"vg", g.vg},
                                   {"pg0", g.pg0}, {"qg0", g.qg0}});
  j["branches"] = json::array();
  for (const auto& br : net.branches)
    j["branches"].push_back(json{{"from", br.from}, {"to", br.to},
                                 {"r", br.r}, {"x", br.x}, {"b_ch", br.b_ch},
                                 {"tap", br.tap}, {"shift", br.shift},
                                 {"pmax", br.pmax}});
  return j.dump(2);
}

NetworkCase case_from_json(const std::string& text) {
  json j = json::parse(text);
  NetworkCase net;
  net.name = j.at("name").get<std::string>();
  net.base_mva = j.at("base_mva").get<double>();
  for (const auto& jb : j.at("buses")) net.buses.push_back(bus_from_json(jb));
  for (const auto& jg : j.at("generators")) {
    Generator g;
    g.bus = jg.at("bus").get<int>();
    g.pmin = jg.at("pmin").get<double>();
    g.pmax = jg.at("pmax").get<double>();
    g.qmin = jg.at("qmin").get<double>();
    g.qmax = jg.at("qmax").get<double>();
    g.cost_a = jg.at("cost_a").get<double>();
    g.cost_b = jg.at("cost_b").get<double>();
    g.cost_c = jg.at("cost_c").get<double>();
    g.vg = jg.at("vg").get<double>();
    g.pg0 = jg.at("pg0").get<double>();
    g.qg0 = jg.at("qg0").get<double>();
    net.generators.push_back(g);
  }
  for (const auto& jb : j.at("branches")) {
    Branch br;
    br.from = jb.at("from").get<int>();
    br.to = jb.at("to").get<int>();
    br.r = jb.at("r").get<double>();
    br.x = jb.at("x").get<double>();
    br.b_ch = jb.at("b_ch").get<double>();
    br.tap = jb.at("tap").get<double>();
    br.shift = jb.at("shift").get<double>();
    br.pmax = jb.at("pmax").get<double>();
    net.branches.push_back(br);
  }
  return net;
}

}  // namespace acopf::net
