// Shoots v(0) = 1 at p_c for a few weights, compares with the bubble, and
// prints the best constant of the matching inequality.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cknlab/cknlab.hpp"

int main() {
  using namespace cknlab;
  struct Weights {
    int N;
    double a, b;
  };
  for (const auto& [N, a, b] : {Weights{3, 0, 0}, {4, 0.5, 1}, {3, 0, -1}}) {
    const double pc = critical_exponent(N, a, b);
    const ProblemParams params{N, a, b, pc};
    ShootConfig config;
    config.r_max = 1e3;
    const auto traj = shoot(params, config);

    const auto bubble = normalized_bubble(params);
    double worst = 0;
    for (const auto& node : traj.nodes) {
      if (node.r > 100) break;
      worst = std::max(worst, std::abs(node.v / bubble_eval(bubble, node.r).v - 1));
    }
    std::printf("N=%d a=%g b=%g  p_c=%.6f  %-16s max |v/bubble - 1| on [0,100] = %.2e\n", N, a, b, pc,
                std::string(outcome_name(traj.outcome)).c_str(), worst);

    const CknTriple triple{N, a, b, pc + 1};
    try {
      const auto rep = best_constant(triple);
      std::printf("    q = %.6f  S = %.10f  (closed form %.10f)\n", triple.q, rep.rayleigh, *rep.closed_form);
    } catch (const Error& e) {
      std::printf("    q = %.6f  %s\n", triple.q, e.what());
    }
  }
}
