#include "spsp/cli.hpp"

int main(int argc, char** argv) { return spsp::cli::dispatch(argc, argv); }
