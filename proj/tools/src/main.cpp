#include "qres_cli/cli.hpp"

int main(int argc, char** argv) { return qres::cli::main(argc, argv); }
