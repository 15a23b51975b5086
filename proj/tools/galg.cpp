#include "galg/cli.hpp"

int main(int argc, char** argv) { return galg::cli::main(argc, argv); }
