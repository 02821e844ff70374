#include "mdi/cli.hpp"

int main(int argc, char** argv) { return mdi::run_cli(argc, argv); }
