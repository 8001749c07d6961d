#include "sage/cli.hpp"

int main(int argc, char** argv) { return sage::run_cli(argc, argv); }
