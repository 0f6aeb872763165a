#include "cli.hpp"

int main(int argc, char** argv) { return kvevp::cli::main(argc, argv); }
