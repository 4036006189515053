#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqfree::cli {

// Exit codes: 0 success, 1 failed verification or internal error, 2 parse
// error, 3 guard or overflow, 4 precondition or dimension mismatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqfree::cli
