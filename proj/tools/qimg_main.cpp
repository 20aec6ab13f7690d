#include "qimg/cli.hpp"

int main(int argc, char** argv) { return qimg::run_cli(argc, argv); }
