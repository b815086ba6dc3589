#include "kaleido/cli.hpp"

int main(int argc, char** argv) { return kaleido::cli::run(argc, argv); }
