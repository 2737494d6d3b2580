#include "rgroups/cli.hpp"

int main(int argc, char** argv) { return rgroups::cli::run(argc, argv); }
