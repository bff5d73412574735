// Build the two local Lorentz frames through p and print their expansions,
// followed by a short stretch of the geodesic of the moving one.
#include <cstdio>

#include "framekin/framekin.hpp"

using namespace framekin;

int main() {
  const PlliResult r = plli_expansion_pair(1e-3, 0.1);
  std::printf("theta_L  %.3e (raw %.3e)\n", r.theta_L.normalized, r.theta_L.raw);
  std::printf("theta_L' %.3e (raw %.3e)\n", r.theta_Lprime.normalized, r.theta_Lprime.raw);
  std::printf("ratio to a v^2: %.3e\n", r.ratio_to_av2());

  const GeodesicPath& g = r.Lprime.geodesic;
  for (std::size_t i = 0; i < g.samples.size(); i += g.samples.size() / 4) {
    const GeodesicSample& q = g.samples[i];
    std::printf("s %+.3f  t %+.6f  x1 %+.6f\n", q.s, q.point.coords[0], q.point.coords[1]);
  }
}
