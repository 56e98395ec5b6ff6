#include <cmath>
#include <complex>
#include <vector>

#include "acopf/network.hpp"

namespace acopf::net {

AdmittanceMatrix build_ybus(const NetworkCase& net) {
  using cd = std::complex<double>;
  const int n = net.n_buses();
  auto index = net.bus_index();

  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(net.branches.size() * 4 + n);

  for (const auto& br : net.branches) {
    if (br.r == 0.0 && br.x == 0.0)
      throw SemanticError("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                          " has zero impedance");
    const int f = index.at(br.from);
    const int t = index.at(br.to);
    const cd y = br.series_admittance();
    const cd ysh(0.0, br.b_ch / 2.0);
    const cd tap = std::polar(br.tap, br.shift);

    trips.emplace_back(f, f, (y + ysh) / std::norm(tap));
    trips.emplace_back(t, t, y + ysh);
    trips.emplace_back(f, t, -y / std::conj(tap));
    trips.emplace_back(t, f, -y / tap);
  }
  for (int i = 0; i < n; ++i) {
    const Bus& b = net.buses[i];
    if (b.gsh != 0.0 || b.bsh != 0.0) trips.emplace_back(i, i, cd(b.gsh, b.bsh));
  }

  AdmittanceMatrix out;
  out.n = n;
  out.Y.resize(n, n);
  out.Y.setFromTriplets(trips.begin(), trips.end());  // duplicates add up
  return out;
}

}  // namespace acopf::net
