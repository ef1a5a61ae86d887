#include "mcdp/cli.hpp"

int main(int argc, char** argv) { return mcdp::run_cli(argc, argv); }
