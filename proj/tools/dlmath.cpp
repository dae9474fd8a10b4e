#include "dlmath/cli/commands.hpp"

int main(int argc, char** argv) { return dlmath::cli::run_cli(argc, argv); }
