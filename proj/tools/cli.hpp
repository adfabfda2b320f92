#pragma once

#include <iosfwd>

namespace vcsim::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInvariant = 2, kLivelock = 3 };

// Parses argv and runs one command. Never throws.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vcsim::cli
