#include "rarefaction/cli.hpp"

int main(int argc, char** argv) { return rarefaction::run_cli(argc, argv); }
