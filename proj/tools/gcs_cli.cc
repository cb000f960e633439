#include <iostream>

#include "gcs/cli.h"

int main(int argc, char** argv) { return gcs::RunCli(argc, argv, std::cout, std::cerr); }
