#include "bplat/cli_app.hpp"

int main(int argc, char** argv) { return bplat::run_cli(argc, argv); }
