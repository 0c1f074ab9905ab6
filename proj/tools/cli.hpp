#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gapforge::cli {

// Exit codes: 0 success, 1 verified failure, 2 usage or parse error,
// 3 resource cap.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gapforge::cli
