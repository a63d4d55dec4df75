#include "cli.hpp"

int main(int argc, char** argv) { return nl4s::cli::run(argc, argv); }
