#include "sparc/harness.hpp"

int main(int argc, char** argv) { return sparc::cli_main(argc, argv); }
