#include "altmin/cli.hpp"

int main(int argc, char** argv) { return altmin::cli_main(argc, argv); }
