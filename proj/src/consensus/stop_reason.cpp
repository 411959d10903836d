#include "riemcon/consensus/optimizer.hpp"

namespace riemcon::consensus {

std::string toString(StopReason reason) {
  switch (reason) {
    case StopReason::MaxIterations: return "max_iters";
    case StopReason::PhiTolerance: return "phi_tol";
    case StopReason::GradTolerance: return "grad_tol";
    case StopReason::None: break;
  }
  return "none";
}

}  // namespace riemcon::consensus
