#include "nrot/cli.hpp"

int main(int argc, char** argv) { return nrot::cli::run(argc, argv); }
