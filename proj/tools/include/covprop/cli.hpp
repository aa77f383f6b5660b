#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace covprop {

/// Entry point of the `covprop` tool; `args` excludes the program name.
/// Returns 0 on success, 1 when validation or a run fails, 2 on bad arguments.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covprop
