#include "interpbound/cli.hpp"

int main(int argc, char** argv) { return interpbound::run_cli(argc, argv); }
