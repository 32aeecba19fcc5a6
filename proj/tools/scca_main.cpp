#include "scca/cli.hpp"

int main(int argc, char** argv) { return scca::run_cli(argc, argv); }
