#include "riemcon/planner/ledger.hpp"

#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::planner {

LedgerStep ledgerSync(const std::vector<bool>& own, const std::vector<bool>& incoming, int owner,
                      bool is_planning, bool prev_plan_done, double thresh_p) {
  if (own.size() != incoming.size())
    throw DimensionError("ledger lengths differ: " + std::to_string(own.size()) + " vs " +
                         std::to_string(incoming.size()));
  if (owner < 0 || owner >= static_cast<int>(own.size()))
    throw DimensionError("ledger owner out of range");
  LedgerStep out;
  out.ledger = incoming;
  if (prev_plan_done && !is_planning) {
    out.ledger[owner] = true;
    int set = 0;
    for (bool f : out.ledger) set += f ? 1 : 0;
    out.start_planning = static_cast<double>(set) / out.ledger.size() >= thresh_p;
  } else {
    out.ledger[owner] = is_planning;
  }
  return out;
}

}  // namespace riemcon::planner
