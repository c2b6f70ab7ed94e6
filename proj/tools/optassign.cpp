#include "optassign/cli.hpp"

int main(int argc, char** argv) { return optassign::cli_main(argc, argv); }
