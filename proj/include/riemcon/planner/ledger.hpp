#pragma once

#include <vector>

namespace riemcon::planner {

struct LedgerStep {
  std::vector<bool> ledger;
  bool start_planning = false;
};

/// One application of the ledger synchronization rule for robot `owner`:
/// copy the incoming ledger; when ready (previous plan done and not
/// planning) set the own flag and start planning once the mean flag
/// reaches thresh_p; otherwise the own flag mirrors is_planning.
LedgerStep ledgerSync(const std::vector<bool>& own, const std::vector<bool>& incoming, int owner,
                      bool is_planning, bool prev_plan_done, double thresh_p);

}  // namespace riemcon::planner
