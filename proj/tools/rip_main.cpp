#include "rip/cli.hpp"

int main(int argc, char** argv) { return rip::cli_main(argc, argv); }
