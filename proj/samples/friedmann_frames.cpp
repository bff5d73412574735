// Compare the comoving frame V and the boosted frame Z of a linearly
// expanding Friedmann model, and check which of them is a PIRF.
#include <cstdio>

#include "framekin/framekin.hpp"

using namespace framekin;

int main() {
  const FriedmannModel m = make_friedmann(1e-3, u_from_velocity(0.1));
  const ChartPoint p{{0, 0, 0, 0}, kFriedmannChart};

  for (const FrameField* f : {&m.frame_V, &m.frame_Z}) {
    const KinematicDecomposition k = kinematic_decompose(m.metric, *f, p);
    const auto samples = sample_grid(p.coords, {0.2, 0.2, 0.2, 0.2});
    const PirfReport r = is_pirf(m.metric, *f, samples);
    std::printf("%-2s theta %.12e  pirf %s  class %s\n", f->label().c_str(), k.expansion, r.is_pirf ? "yes" : "no",
                to_string(classify_synchronizability(m.metric, *f, samples).value));
  }

  const EquivalenceVerdict v = equivalence_verdict(m.metric, m.frame_V, m.frame_Z, p);
  std::printf("(V, Z): %s, dominant %s\n", to_string(v.verdict), v.dominant.c_str());
}
