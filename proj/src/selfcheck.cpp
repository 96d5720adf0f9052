#include "ratkrylov/selfcheck.hpp"

namespace rk::selfcheck {

std::vector<CriterionResult> run_all(uint64_t, std::ostream*) { return {}; }
CriterionResult run_one(int, uint64_t) { return {}; }

}  // namespace rk::selfcheck
