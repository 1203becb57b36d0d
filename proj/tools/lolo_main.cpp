#include "lolo/pipeline/cli.hpp"

int main(int argc, char** argv) { return lolo::cli(argc, argv); }
