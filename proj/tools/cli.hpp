#pragma once

#include <string>
#include <vector>

namespace nl4s::cli {

// exit codes: 0 ok, 2 validation, 3 numerical failure, 4 I/O
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace nl4s::cli
