#include "blochsim/cli.hpp"

int main(int argc, char** argv) { return blochsim::run_cli(argc, argv); }
