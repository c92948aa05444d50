#include "tiretrack/cli.hpp"

int main(int argc, char** argv) { return tiretrack::cli::main_entry(argc, argv); }
