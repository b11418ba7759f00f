#include "irs/cli.hpp"

int main(int argc, char** argv) { return irs::run_cli(argc, argv); }
