#include "pcf/cli.hpp"

int main(int argc, char** argv) { return pcf::cli::main_entry(argc, argv); }
