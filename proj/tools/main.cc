#include "ciqa/cli/cli.h"

int main(int argc, char** argv) { return ciqa::RunCli(argc, argv); }
