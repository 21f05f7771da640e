#include "oamlab/cli.hpp"

int main(int argc, char** argv) { return oamlab::cli::execute_command(argc, argv); }
