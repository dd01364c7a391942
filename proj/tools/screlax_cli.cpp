#include "screlax/cli.hpp"

int main(int argc, char** argv) { return screlax::cli::run(argc, argv); }
