#include "dmxci/cli.hpp"

int main(int argc, char** argv) { return dmxci::run_cli(argc, argv); }
