#include "depgen/cli.hpp"

int main(int argc, char** argv) { return depgen::run_cli(argc, argv); }
