#include "gad/cli.hpp"

int main(int argc, char** argv) { return gad::cli::run_main(argc, argv); }
