#include "qpt/cli/run.hpp"

int main(int argc, char** argv) { return qpt::cli::main_entry(argc, argv); }
