#include "gpk/cli.hpp"

int main(int argc, char** argv) { return gpk::cli_main(argc, argv); }
