#include "chemodg/cli.hpp"

int main(int argc, char** argv) { return chemodg::cli_main(argc, argv); }
