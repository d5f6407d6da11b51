#include "tagnet/cli.hpp"

int main(int argc, char** argv) { return tagnet::cli::run(argc, argv); }
