#include "uidiff/cli.hpp"

int main(int argc, char** argv) { return uidiff::cli::run(argc, argv); }
