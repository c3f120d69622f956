#include "cli.hpp"

int main(int argc, char** argv) { return lpkit::cli::run_cli(argc, argv); }
