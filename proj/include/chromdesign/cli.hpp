#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chromdesign::cli {

// Exit codes.
enum Exit : int {
  kOk = 0,
  kNegative = 1,  // proven negative answer
  kInvalid = 2,
  kIo = 3,
  kExhausted = 4,
  kIntegrity = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chromdesign::cli
