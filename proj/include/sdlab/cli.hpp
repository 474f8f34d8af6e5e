#pragma once

#include <string>
#include <vector>

namespace sdlab::cli {

// Exit codes: 0 success, 1 expectation mismatch or failed check, 2 input error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

// "2^6..2^14", "64..1024" (doubling) and comma lists.
std::vector<std::size_t> parse_rows(const std::string& text);

}  // namespace sdlab::cli
