#include "ariel/cli/commands.hpp"

int main(int argc, char** argv) { return ariel::cli::run(argc, argv); }
